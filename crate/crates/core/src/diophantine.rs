//! Parity-constrained simultaneous Diophantine approximation.
//!
//! The attainability question reduces to finding a positive integer q and
//! integers p_i with prescribed parities such that `|theta_i q - p_i|` is
//! small for all i at once. The workhorse is lattice reduction on the
//! `(n+1)`-dimensional basis
//!
//! ```text
//! B(s, X) = [ x_1          -x_1 theta_1 ]
//!           [      ...          ...     ]
//!           [          x_n -x_n theta_n ]
//!           [  0   ...   0       s      ]
//! ```
//!
//! whose short vectors encode good approximations: a vector with coefficients
//! `(p_1..p_n, q)` has components `x_i (p_i - q theta_i)` and `s q`, so the
//! scale s trades denominator size against accuracy and the weights X shift
//! accuracy between components. Everything is scaled by 2^192 and handed to
//! exact-integer LLL; thetas and weights are quantized to 96 fractional bits
//! on the way in.
//!
//! Parities that the raw reduction misses are repaired by the diagonal
//! scaling iteration: approximate `Y^-1 theta` instead, with `Y_ii = 2` where
//! an even numerator is required (making `p_i = 2 pbar_i` even by
//! construction) and `Y_ii = 2^-d` to strip the factor `2^d` from a numerator
//! that must be odd. At a fixed point the result satisfies
//! `max_i |theta_i q - p_i| <= 2 / q^(1/n)`.

pub mod cf;
pub mod ga;
pub mod lll;

pub use cf::{continued_fraction, semiconvergent, ContinuedFraction, Convergent};
pub use ga::{ga_weight_search, GaConfig};
pub use lll::{lll_reduce, shortest_vector, Reduction};

use crate::error::{Error, Result};
use crate::fixed::{Fx, FRAC_BITS};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

/// Fractional bits kept when quantizing thetas, weights, and the scale.
pub const LATTICE_QUANT_BITS: u32 = 96;

/// Required parity of a numerator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
    /// No constraint.
    Any,
}

impl Parity {
    pub fn of(x: &BigInt) -> Parity {
        if (x % 2u8).is_zero() {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn matches(self, x: &BigInt) -> bool {
        match self {
            Parity::Any => true,
            p => Parity::of(x) == p,
        }
    }
}

/// Parses a parity string: `e`/`0` even, `o`/`1` odd, `x`/`-`/`a` don't-care.
pub fn parse_parities(s: &str) -> Result<Vec<Parity>> {
    s.chars()
        .map(|c| match c.to_ascii_lowercase() {
            'e' | '0' => Ok(Parity::Even),
            'o' | '1' => Ok(Parity::Odd),
            'x' | '-' | 'a' => Ok(Parity::Any),
            other => Err(Error::InvalidArgument(format!(
                "parity character {other:?}; expected e/o/x"
            ))),
        })
        .collect()
}

/// One simultaneous approximation `p / q` with its quality bookkeeping.
#[derive(Clone, Debug)]
pub struct DiophantineSolution {
    /// Numerators, one per theta component.
    pub p: Vec<BigInt>,
    /// Positive denominator.
    pub q: BigInt,
    /// `|theta_i q - p_i|`.
    pub errors: Vec<f64>,
    /// Largest component of `errors`.
    pub max_error: f64,
    /// Per-component parity satisfaction.
    pub parity_ok: Vec<bool>,
    /// Scale parameter used (0 marks the continued-fraction path).
    pub s: f64,
    /// Weights used; for the scaling iteration these are the final Y diagonal.
    pub weights: Vec<f64>,
}

impl DiophantineSolution {
    /// True when every parity constraint is met.
    pub fn feasible(&self) -> bool {
        self.parity_ok.iter().all(|&ok| ok)
    }

    /// Number of violated parity constraints.
    pub fn violations(&self) -> usize {
        self.parity_ok.iter().filter(|&&ok| !ok).count()
    }

    /// `2 / q^(1/n)`, the accuracy the scaling iteration guarantees.
    pub fn dirichlet_bound(&self) -> f64 {
        2.0 * (-ln_bigint(&self.q) / self.p.len() as f64).exp()
    }

    fn describe(&self) -> String {
        format!(
            "q = {}, max_error = {:.3e}, violations = {}",
            self.q,
            self.max_error,
            self.violations()
        )
    }
}

/// Natural log of a positive big integer, safe for any magnitude.
pub fn ln_bigint(x: &BigInt) -> f64 {
    assert!(x.is_positive(), "ln of non-positive integer");
    let bits = x.bits();
    if bits <= 53 {
        x.to_f64().expect("small integer").ln()
    } else {
        let shift = bits - 53;
        let head = (x >> shift).to_f64().expect("53-bit head");
        head.ln() + shift as f64 * std::f64::consts::LN_2
    }
}

fn quantize_positive(value: f64, what: &str) -> Result<BigInt> {
    if !(value > 0.0) || !value.is_finite() {
        return Err(Error::InvalidArgument(format!("{what} must be positive and finite, got {value}")));
    }
    let q = Fx::from_f64(value)
        .ok_or_else(|| Error::InvalidArgument(format!("{what} is not finite")))?
        .quantize(LATTICE_QUANT_BITS);
    Ok(q)
}

/// Builds the scaled integer lattice columns for `B(s, X)`.
fn build_lattice(theta: &[Fx], s: f64, weights: &[f64]) -> Result<Vec<Vec<BigInt>>> {
    let n = theta.len();
    let t: Vec<BigInt> = theta.iter().map(|x| x.quantize(LATTICE_QUANT_BITS)).collect();
    let mut a = Vec::with_capacity(n);
    for (i, &w) in weights.iter().enumerate() {
        let ai = quantize_positive(w, &format!("weight x_{}", i + 1))?;
        if ai.is_zero() {
            return Err(Error::InvalidArgument(format!(
                "weight x_{} = {w} quantizes to zero at {LATTICE_QUANT_BITS} fractional bits",
                i + 1
            )));
        }
        a.push(ai);
    }
    let c = quantize_positive(s, "scale s")?;
    if c.is_zero() {
        return Err(Error::ScaleUnderflow { s, bits: LATTICE_QUANT_BITS });
    }
    let mut cols = Vec::with_capacity(n + 1);
    for (j, aj) in a.iter().enumerate() {
        let mut col = vec![BigInt::zero(); n + 1];
        col[j] = aj << LATTICE_QUANT_BITS;
        cols.push(col);
    }
    let mut last: Vec<BigInt> = (0..n).map(|i| -(&a[i] * &t[i])).collect();
    last.push(&c << LATTICE_QUANT_BITS);
    cols.push(last);
    Ok(cols)
}

/// Builds the solution determined by a denominator: numerators are the
/// nearest integers to `theta_i q`, errors are exact fixed-point residuals.
pub fn solution_from_q(
    theta: &[Fx],
    parity: &[Parity],
    q: BigInt,
    s: f64,
    weights: &[f64],
) -> DiophantineSolution {
    assert!(q.is_positive());
    let one = BigInt::from(1) << FRAC_BITS;
    let mut p = Vec::with_capacity(theta.len());
    let mut errors = Vec::with_capacity(theta.len());
    for th in theta {
        let scaled = th.mantissa() * &q;
        let pi = crate::fixed::div_round(&scaled, &one);
        let err = Fx::from_mantissa(&scaled - &pi * &one).abs().to_f64();
        p.push(pi);
        errors.push(err);
    }
    let max_error = errors.iter().fold(0.0f64, |m, &e| m.max(e));
    let parity_ok = p.iter().zip(parity).map(|(pi, par)| par.matches(pi)).collect();
    DiophantineSolution {
        p,
        q,
        errors,
        max_error,
        parity_ok,
        s,
        weights: weights.to_vec(),
    }
}

/// Weighted LLL approximation: reduces `B(s, X)` and reads `(p, q)` off the
/// first reduced vector. Parity is recorded, not enforced.
pub fn weighted_simultaneous_approx(
    theta: &[Fx],
    parity: &[Parity],
    s: f64,
    weights: &[f64],
) -> Result<DiophantineSolution> {
    weighted_simultaneous_approx_with(theta, parity, s, weights, 3, 4)
}

/// Same as [`weighted_simultaneous_approx`] with an explicit LLL delta.
pub fn weighted_simultaneous_approx_with(
    theta: &[Fx],
    parity: &[Parity],
    s: f64,
    weights: &[f64],
    delta_num: u64,
    delta_den: u64,
) -> Result<DiophantineSolution> {
    validate_inputs(theta, parity, weights)?;
    let cols = build_lattice(theta, s, weights)?;
    let red = lll_reduce(&cols, delta_num, delta_den)?;
    let n = theta.len();
    let mut q = red.coeffs[0][n].clone();
    if q.is_zero() {
        return Err(Error::DegenerateScale { s });
    }
    if q.is_negative() {
        q = -q;
    }
    Ok(solution_from_q(theta, parity, q, s, weights))
}

/// All denominators reachable from one reduction: the reduced basis itself,
/// an enumeration of small integer combinations, and small multiples of each
/// (multiples repair parity at proportional accuracy cost). Solutions are
/// sorted by `(max_error, q)`.
pub fn solution_family(
    theta: &[Fx],
    parity: &[Parity],
    s: f64,
    weights: &[f64],
) -> Result<Vec<DiophantineSolution>> {
    validate_inputs(theta, parity, weights)?;
    let cols = build_lattice(theta, s, weights)?;
    let red = lll_reduce(&cols, 3, 4)?;
    let n = theta.len();
    let dim = n + 1;
    let mut qs: Vec<BigInt> = Vec::new();
    let push = |q: &BigInt, qs: &mut Vec<BigInt>| {
        let qa = q.abs();
        if !qa.is_zero() && !qs.contains(&qa) {
            qs.push(qa);
        }
    };
    for row in &red.coeffs {
        push(&row[n], &mut qs);
    }
    if dim <= 6 {
        let rad = lll::enumeration_radius(dim);
        let mut beta = vec![-rad; dim];
        'outer: loop {
            let mut q = BigInt::zero();
            for (j, &b) in beta.iter().enumerate() {
                if b != 0 {
                    q += BigInt::from(b) * &red.coeffs[j][n];
                }
            }
            push(&q, &mut qs);
            let mut pos = 0;
            loop {
                if pos == dim {
                    break 'outer;
                }
                if beta[pos] < rad {
                    beta[pos] += 1;
                    break;
                }
                beta[pos] = -rad;
                pos += 1;
            }
        }
    }
    let base = qs.clone();
    for q in &base {
        for m in 2u8..=4 {
            push(&(q * m), &mut qs);
        }
    }
    if qs.is_empty() {
        return Err(Error::DegenerateScale { s });
    }
    let mut family: Vec<DiophantineSolution> = qs
        .into_iter()
        .map(|q| solution_from_q(theta, parity, q, s, weights))
        .collect();
    family.sort_by(|a, b| {
        a.max_error
            .total_cmp(&b.max_error)
            .then_with(|| a.q.cmp(&b.q))
    });
    Ok(family)
}

fn validate_inputs(theta: &[Fx], parity: &[Parity], weights: &[f64]) -> Result<()> {
    if theta.is_empty() {
        return Err(Error::InvalidArgument("theta must be nonempty".into()));
    }
    if parity.len() != theta.len() || weights.len() != theta.len() {
        return Err(Error::InvalidArgument(format!(
            "length mismatch: {} thetas, {} parities, {} weights",
            theta.len(),
            parity.len(),
            weights.len()
        )));
    }
    Ok(())
}

/// Knobs for `parity_fix_by_scaling`.
#[derive(Clone, Debug)]
pub struct ParityFixConfig {
    /// Denominator budget for the one-dimensional convergent path.
    pub budget: u64,
    /// Scale for the lattice path (two or more thetas).
    pub s: f64,
    /// Cap on continued-fraction terms.
    pub max_terms: usize,
}

impl Default for ParityFixConfig {
    fn default() -> Self {
        ParityFixConfig { budget: 256, s: 2f64.powi(-32), max_terms: 64 }
    }
}

/// Repairs parities by the diagonal scaling iteration.
///
/// Each round approximates `theta_i / 2^(y_i)`; the exponents update to
/// `y_i = 1` where an even numerator is demanded but the round produced an
/// odd one, and to `y_i = -v2(pbar_i)` where an odd numerator is demanded.
/// A fixed point of the exponent vector yields numerators with the demanded
/// parities by construction; the returned solution then satisfies
/// `max_i |theta_i q - p_i| <= 2 / q^(1/n)`.
pub fn parity_fix_by_scaling(
    theta: &[Fx],
    parity: &[Parity],
    max_rounds: usize,
    config: Option<&ParityFixConfig>,
) -> Result<DiophantineSolution> {
    let default_cfg = ParityFixConfig::default();
    let cfg = config.unwrap_or(&default_cfg);
    if theta.is_empty() || parity.len() != theta.len() {
        return Err(Error::InvalidArgument(format!(
            "need matching nonempty theta/parity, got {} and {}",
            theta.len(),
            parity.len()
        )));
    }
    let n = theta.len();
    let mut y: Vec<i64> = vec![0; n];
    let mut s = cfg.s;
    let mut local_cfg = cfg.clone();
    let mut bound_retries = 0u8;
    let mut seen: std::collections::HashSet<Vec<i64>> = std::collections::HashSet::new();
    for _round in 0..max_rounds.max(1) {
        // the iteration is deterministic, so revisiting an exponent vector
        // means a cycle; perturb the approximation source to leave it
        if !seen.insert(y.clone()) {
            if n == 1 {
                local_cfg.budget = local_cfg.budget.saturating_mul(2);
            } else {
                s *= 2f64.powi(-2);
            }
        }
        let theta_bar: Vec<Fx> = theta
            .iter()
            .zip(&y)
            .map(|(th, &yi)| scale_pow2(th, -yi))
            .collect();
        let (p_bar, q) = if n == 1 {
            round_approx_1d(&theta_bar[0], y[0], parity[0], &local_cfg)?
        } else {
            let any = vec![Parity::Any; n];
            let sol = weighted_simultaneous_approx(&theta_bar, &any, s, &vec![1.0; n])?;
            (sol.p, sol.q)
        };
        let mut converged = true;
        let mut stuck_zero = false;
        for i in 0..n {
            let y_new = match parity[i] {
                Parity::Any => y[i],
                Parity::Even => {
                    if Parity::of(&p_bar[i]) == Parity::Odd {
                        1
                    } else {
                        y[i]
                    }
                }
                Parity::Odd => match p_bar[i].trailing_zeros() {
                    Some(d) => -(d as i64),
                    None => {
                        stuck_zero = true;
                        y[i]
                    }
                },
            };
            if y_new != y[i] {
                converged = false;
                y[i] = y_new;
            }
        }
        if !converged {
            continue;
        }
        // rebuild numerators against the original thetas: p_i = 2^(y_i) pbar_i
        let p: Vec<BigInt> = p_bar
            .iter()
            .zip(&y)
            .map(|(pb, &yi)| if yi >= 0 { pb << yi as u32 } else { pb >> (-yi) as u32 })
            .collect();
        let weights: Vec<f64> = y.iter().map(|&yi| 2f64.powi(yi as i32)).collect();
        let mut sol = solution_with_p(theta, parity, p, q, if n == 1 { 0.0 } else { s }, &weights);
        if stuck_zero || !sol.feasible() {
            return Err(Error::NoParityFeasible { best: sol.describe() });
        }
        if sol.max_error <= sol.dirichlet_bound() {
            return Ok(sol);
        }
        // accuracy shortfall: push the lattice toward larger denominators
        if n > 1 && bound_retries < 3 {
            bound_retries += 1;
            s *= 2f64.powi(-8);
            continue;
        }
        sol.s = s;
        return Err(Error::ParityNonConvergence { rounds: max_rounds });
    }
    Err(Error::ParityNonConvergence { rounds: max_rounds })
}

/// `x * 2^e` by exact mantissa shifting (rounded when e < 0).
fn scale_pow2(x: &Fx, e: i64) -> Fx {
    if e >= 0 {
        Fx::from_mantissa(x.mantissa() << e as u32)
    } else {
        let den = BigInt::from(1) << (-e) as u32;
        Fx::from_mantissa(crate::fixed::div_round(x.mantissa(), &den))
    }
}

/// One round of the 1-D path: among convergents with denominators within the
/// budget, prefer the largest-denominator one whose rescaled numerator would
/// satisfy the parity; fall back to the largest-denominator convergent.
fn round_approx_1d(
    theta_bar: &Fx,
    y: i64,
    parity: Parity,
    cfg: &ParityFixConfig,
) -> Result<(Vec<BigInt>, BigInt)> {
    let budget = BigInt::from(cfg.budget);
    let convs = cf::convergents_within(theta_bar, &budget, cfg.max_terms);
    if convs.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "no convergents within denominator budget {}",
            cfg.budget
        )));
    }
    let satisfies = |pb: &BigInt| -> bool {
        match parity {
            Parity::Any => true,
            Parity::Even => y >= 1 || Parity::of(pb) == Parity::Even,
            Parity::Odd => pb.trailing_zeros() == Some((-y) as u64),
        }
    };
    let chosen = convs
        .iter()
        .rev()
        .find(|c| satisfies(&c.p))
        .or_else(|| convs.last())
        .expect("nonempty convergent list");
    Ok((vec![chosen.p.clone()], chosen.q.clone()))
}

/// Assembles a solution when the numerators are already fixed.
fn solution_with_p(
    theta: &[Fx],
    parity: &[Parity],
    p: Vec<BigInt>,
    q: BigInt,
    s: f64,
    weights: &[f64],
) -> DiophantineSolution {
    let one = BigInt::from(1) << FRAC_BITS;
    let errors: Vec<f64> = theta
        .iter()
        .zip(&p)
        .map(|(th, pi)| {
            Fx::from_mantissa(th.mantissa() * &q - pi * &one)
                .abs()
                .to_f64()
        })
        .collect();
    let max_error = errors.iter().fold(0.0f64, |m, &e| m.max(e));
    let parity_ok = p.iter().zip(parity).map(|(pi, par)| par.matches(pi)).collect();
    DiophantineSolution {
        p,
        q,
        errors,
        max_error,
        parity_ok,
        s,
        weights: weights.to_vec(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fx(x: f64) -> Fx {
        Fx::from_f64(x).unwrap()
    }

    #[test]
    fn half_theta_family_rejects_then_accepts() {
        let theta = [Fx::from_ratio(1, 2)];
        let parity = [Parity::Even];
        let family = solution_family(&theta, &parity, 1.0, &[1.0]).unwrap();
        // exact approximations first: q = 2 (p = 1, odd) before q = 4 (p = 2)
        let exact: Vec<_> = family.iter().filter(|s| s.max_error == 0.0).collect();
        assert!(exact.len() >= 2);
        assert_eq!(exact[0].q, BigInt::from(2));
        assert!(!exact[0].feasible());
        let accepted = family.iter().find(|s| s.feasible()).unwrap();
        assert_eq!(accepted.q, BigInt::from(4));
        assert_eq!(accepted.p, vec![BigInt::from(2)]);
    }

    #[test]
    fn golden_ratio_parity_fix_reaches_233() {
        // theta = 1 + sqrt 5 with an even numerator demanded
        let theta = [Fx::one() + Fx::from_int(5).sqrt()];
        let sol = parity_fix_by_scaling(&theta, &[Parity::Even], 8, None).unwrap();
        assert_eq!(sol.q, BigInt::from(233));
        assert_eq!(sol.p, vec![BigInt::from(754)]);
        assert!(sol.feasible());
        assert!((sol.max_error - 0.003836).abs() < 1e-4);
        assert!(sol.max_error <= sol.dirichlet_bound());
        assert_eq!(sol.weights, vec![2.0]);
    }

    #[test]
    fn quarter_theta_odd_parity_is_direct() {
        let theta = [Fx::from_ratio(1, 4)];
        let sol = parity_fix_by_scaling(&theta, &[Parity::Odd], 8, None).unwrap();
        assert_eq!(sol.q, BigInt::from(4));
        assert_eq!(sol.p, vec![BigInt::from(1)]);
        assert_eq!(sol.max_error, 0.0);
    }

    #[test]
    fn lattice_first_vector_approximates_two_thetas() {
        // sqrt 2 and sqrt 3 simultaneously
        let theta = [fx(2f64.sqrt()), fx(3f64.sqrt())];
        let parity = [Parity::Any, Parity::Any];
        let sol = weighted_simultaneous_approx(&theta, &parity, 1e-6, &[1.0, 1.0]).unwrap();
        assert!(sol.q > BigInt::from(1));
        assert!(sol.max_error < 0.05, "max_error = {}", sol.max_error);
        // numerators really are the nearest integers
        for (pi, th) in sol.p.iter().zip(&theta) {
            let approx = th.to_f64() * sol.q.to_f64().unwrap();
            assert_eq!(pi, &BigInt::from(approx.round() as i64));
        }
    }

    #[test]
    fn scaling_iteration_fixes_random_parities_in_two_dims() {
        let theta = [fx(2f64.sqrt()), fx(std::f64::consts::E)];
        for parity in [
            [Parity::Even, Parity::Odd],
            [Parity::Odd, Parity::Even],
            [Parity::Odd, Parity::Odd],
            [Parity::Even, Parity::Even],
        ] {
            let sol = parity_fix_by_scaling(&theta, &parity, 24, None).unwrap();
            assert!(sol.feasible(), "parity {:?} not fixed", parity);
            assert!(
                sol.max_error <= sol.dirichlet_bound(),
                "bound violated: {} > {}",
                sol.max_error,
                sol.dirichlet_bound()
            );
        }
    }

    #[test]
    fn degenerate_scale_is_reported() {
        let theta = [fx(0.3)];
        // s huge: the q column is so expensive the first vector ignores it
        let err = weighted_simultaneous_approx(&theta, &[Parity::Any], 1e9, &[1.0]);
        assert!(matches!(err, Err(Error::DegenerateScale { .. })));
    }

    #[test]
    fn parity_string_parsing() {
        let ps = parse_parities("eoxEO1").unwrap();
        assert_eq!(
            ps,
            vec![Parity::Even, Parity::Odd, Parity::Any, Parity::Even, Parity::Odd, Parity::Odd]
        );
        assert!(parse_parities("z").is_err());
    }
}
