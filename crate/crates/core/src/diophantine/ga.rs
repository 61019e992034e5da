//! Genetic search over lattice weights.
//!
//! The weighted reduction is sensitive to the diagonal X: a component whose
//! numerator comes out with the wrong parity can often be repaired just by
//! re-balancing the weights. This module evolves weight vectors with genes
//! `g_i = log2 x_i` in `[-8, 8]`; an individual's fitness is the pair
//! `(parity violations, max_error)` compared lexicographically, so feasible
//! solutions dominate accurate-but-infeasible ones. Genes whose numerator
//! violated its parity mutate three times as often, which in practice walks
//! the population toward feasible corners quickly.

use super::{weighted_simultaneous_approx, DiophantineSolution, Parity};
use crate::error::{Error, Result};
use crate::fixed::Fx;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Search parameters; defaults follow the sizes that worked in practice.
#[derive(Clone, Debug)]
pub struct GaConfig {
    pub population: usize,
    pub max_gens: usize,
    pub tournament: usize,
    pub crossover_rate: f64,
    pub mutation_rate: f64,
    /// Multiplier on `mutation_rate` for parity-violating genes.
    pub violation_boost: f64,
    /// Genes live in `[-gene_range, gene_range]` (log2 of the weight).
    pub gene_range: f64,
    /// Lattice scale parameter passed to every evaluation.
    pub s: f64,
    pub seed: u64,
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig {
            population: 200,
            max_gens: 50,
            tournament: 3,
            crossover_rate: 0.8,
            mutation_rate: 0.1,
            violation_boost: 3.0,
            gene_range: 8.0,
            s: 2f64.powi(-28),
            seed: 0,
        }
    }
}

struct Individual {
    genes: Vec<f64>,
    solution: Option<DiophantineSolution>,
}

impl Individual {
    fn fitness(&self) -> (usize, f64) {
        match &self.solution {
            Some(sol) => (sol.violations(), sol.max_error),
            None => (usize::MAX, f64::INFINITY),
        }
    }

    fn violates(&self, gene: usize) -> bool {
        match &self.solution {
            Some(sol) => !sol.parity_ok[gene],
            None => true,
        }
    }
}

fn better(a: (usize, f64), b: (usize, f64)) -> bool {
    a.0 < b.0 || (a.0 == b.0 && a.1 < b.1)
}

/// Evolves weights until some individual satisfies every parity constraint.
///
/// Deterministic for a fixed seed. Stops at the first zero-violation
/// individual; exhausting `max_gens` without one is an error carrying a
/// description of the best candidate.
pub fn ga_weight_search(
    theta: &[Fx],
    parity: &[Parity],
    cfg: &GaConfig,
) -> Result<DiophantineSolution> {
    if theta.is_empty() || parity.len() != theta.len() {
        return Err(Error::InvalidArgument(format!(
            "need matching nonempty theta/parity, got {} and {}",
            theta.len(),
            parity.len()
        )));
    }
    if cfg.population < 2 || cfg.tournament == 0 {
        return Err(Error::InvalidArgument(
            "population must be >= 2 and tournament >= 1".into(),
        ));
    }
    let n = theta.len();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let evaluate = |genes: &[f64]| -> Option<DiophantineSolution> {
        let weights: Vec<f64> = genes.iter().map(|g| g.exp2()).collect();
        weighted_simultaneous_approx(theta, parity, cfg.s, &weights).ok()
    };

    let mut population: Vec<Individual> = (0..cfg.population)
        .map(|_| {
            let genes: Vec<f64> = (0..n)
                .map(|_| rng.gen_range(-cfg.gene_range..cfg.gene_range))
                .collect();
            let solution = evaluate(&genes);
            Individual { genes, solution }
        })
        .collect();

    let mut best_idx = argbest(&population);
    if population[best_idx].fitness().0 == 0 {
        return Ok(population[best_idx].solution.clone().expect("evaluated"));
    }

    for _gen in 1..=cfg.max_gens {
        let mut next: Vec<Individual> = Vec::with_capacity(cfg.population);
        // elitism keeps the search monotone
        next.push(Individual {
            genes: population[best_idx].genes.clone(),
            solution: population[best_idx].solution.clone(),
        });
        while next.len() < cfg.population {
            let pa = tournament(&population, cfg.tournament, &mut rng);
            let pb = tournament(&population, cfg.tournament, &mut rng);
            let mut genes: Vec<f64> = if rng.gen_bool(cfg.crossover_rate) {
                (0..n)
                    .map(|g| {
                        if rng.gen_bool(0.5) {
                            population[pa].genes[g]
                        } else {
                            population[pb].genes[g]
                        }
                    })
                    .collect()
            } else {
                population[pa].genes.clone()
            };
            for g in 0..n {
                let boosted = population[pa].violates(g) || population[pb].violates(g);
                let rate = if boosted {
                    (cfg.mutation_rate * cfg.violation_boost).min(1.0)
                } else {
                    cfg.mutation_rate
                };
                if rng.gen_bool(rate) {
                    let u: f64 = rng.gen_range(0.0..1.0);
                    let step = if rng.gen_bool(0.5) { u } else { -u };
                    genes[g] = (genes[g] + step).clamp(-cfg.gene_range, cfg.gene_range);
                }
            }
            let solution = evaluate(&genes);
            next.push(Individual { genes, solution });
        }
        population = next;
        best_idx = argbest(&population);
        if population[best_idx].fitness().0 == 0 {
            return Ok(population[best_idx].solution.clone().expect("evaluated"));
        }
    }

    let best = &population[best_idx];
    Err(Error::NoParityFeasible {
        best: match &best.solution {
            Some(sol) => format!(
                "q = {}, max_error = {:.3e}, violations = {}",
                sol.q,
                sol.max_error,
                sol.violations()
            ),
            None => "no evaluable individual".into(),
        },
    })
}

fn argbest(population: &[Individual]) -> usize {
    let mut best = 0;
    for i in 1..population.len() {
        if better(population[i].fitness(), population[best].fitness()) {
            best = i;
        }
    }
    best
}

fn tournament(population: &[Individual], k: usize, rng: &mut ChaCha8Rng) -> usize {
    let mut winner = rng.gen_range(0..population.len());
    for _ in 1..k {
        let challenger = rng.gen_range(0..population.len());
        if better(population[challenger].fitness(), population[winner].fitness()) {
            winner = challenger;
        }
    }
    winner
}
