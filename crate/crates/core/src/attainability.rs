//! Phase-alignment constraints and rational (in)dependence.
//!
//! The bound `p_max(i,j)` is approached iff the live phases can be steered
//! onto one ray: there must be times t with `exp(-i lambda_k t) s_k` equal
//! for all live k. Taking consecutive pairs `(k, l)` of live eigenspaces in
//! descending eigenvalue order turns this into congruences
//!
//! ```text
//! t omega_kl = (s_k - s_l)/2  (mod 2),   omega_kl = (lambda_k - lambda_l)/pi ,
//! ```
//!
//! and dividing by a reference pair `(m, n)` with equal signs reduces the
//! system to a translation on a torus with angles `theta_kl = 2 omega_kl /
//! omega_mn` and integer right-hand sides of fixed parity. If `{1} union
//! {theta}` is rationally independent the translation is minimal and the
//! bound is attainable to arbitrary accuracy; an integer relation is evidence
//! to the contrary. Dependence is certified by a found relation, while its
//! absence up to a coefficient bound is only evidence of independence.

use crate::diophantine::{lll::lll_reduce, Parity};
use crate::error::{Error, Result};
use crate::fixed::Fx;
use crate::itf::TransferAnalysis;
use crate::spectra::EigenSystem;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Default coefficient bound for dependence searches.
pub const DEFAULT_DEP_MAX_COEFF: i64 = 50;
/// Default verification tolerance for a candidate relation.
pub const DEFAULT_DEP_TOL: f64 = 1e-10;

/// The reduced phase-alignment system for one transfer pair.
#[derive(Clone, Debug)]
pub struct ConstraintSystem {
    /// Source and target sites, 1-based.
    pub pair: (usize, usize),
    /// Live eigenvalue indices (into `EigenSystem::values`), in descending
    /// eigenvalue order, possibly regrouped by sign.
    pub live: Vec<usize>,
    /// Overlap signs in `live` order.
    pub signs: Vec<i8>,
    /// Consecutive index pairs spanning the constraints.
    pub pairs: Vec<(usize, usize)>,
    /// The equal-sign reference pair `(m, n)`.
    pub reference: (usize, usize),
    /// Position of the reference inside `pairs`.
    pub reference_pos: usize,
    /// `omega_kl = (lambda_k - lambda_l)/pi` per entry of `pairs`.
    pub omega: Vec<f64>,
    /// Reference frequency.
    pub omega_mn: f64,
    /// `theta_kl = 2 omega_kl / omega_mn` over the non-reference pairs, at
    /// full fixed precision.
    pub theta: Vec<Fx>,
    /// Same angles as f64.
    pub theta_f64: Vec<f64>,
    /// Required numerator parities (even for equal signs, odd for opposite).
    pub parity: Vec<Parity>,
    /// Number of independent constraints after removing the reference.
    pub n_bar: usize,
    /// True when alternating signs forced a regrouping of the eigenvalues.
    pub reordered: bool,
}

/// Outcome of the dependence analysis for a constraint system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AttainabilityVerdict {
    /// No relation found up to the bound: evidence that the translation is
    /// minimal and the bound attainable to arbitrary accuracy.
    IndependentEvidence,
    /// An integer relation on `{1} union theta`, certifying dependence.
    DependentWithRelation(Vec<BigInt>),
    /// Fewer than three live eigenspaces; no reference pair exists.
    Degenerate,
}

/// Builds the constraint system for an analyzed pair.
///
/// Needs at least three live eigenspaces. When the sign pattern alternates
/// (no consecutive equal-sign pair), the live eigenvalues are regrouped with
/// the `+` group first so a reference pair exists; this only permutes which
/// pairs span the constraints.
pub fn build_constraints(ta: &TransferAnalysis, es: &EigenSystem) -> Result<ConstraintSystem> {
    let asc = ta.live_indices();
    if asc.len() < 3 {
        return Err(Error::DegenerateLive { live: asc.len() });
    }
    // descending eigenvalue order
    let mut live: Vec<usize> = asc.into_iter().rev().collect();
    let sign_of = |idx: usize| ta.signs[idx];
    let has_equal_pair =
        |order: &[usize]| order.windows(2).any(|w| sign_of(w[0]) == sign_of(w[1]));
    let mut reordered = false;
    if !has_equal_pair(&live) {
        let (plus, minus): (Vec<usize>, Vec<usize>) =
            live.iter().partition(|&&idx| sign_of(idx) > 0);
        live = plus;
        live.extend(minus);
        reordered = true;
        debug_assert!(has_equal_pair(&live));
    }
    let signs: Vec<i8> = live.iter().map(|&idx| sign_of(idx)).collect();

    let exact_value =
        |idx: usize| es.value_exact(idx).unwrap_or_else(|| Fx::from_f64(es.values[idx]).expect("finite eigenvalue"));
    let pairs: Vec<(usize, usize)> = live.windows(2).map(|w| (w[0], w[1])).collect();
    let omega: Vec<f64> = pairs
        .iter()
        .map(|&(k, l)| (es.values[k] - es.values[l]) / std::f64::consts::PI)
        .collect();

    let mut reference_pos: Option<usize> = None;
    for (r, &(k, l)) in pairs.iter().enumerate() {
        if sign_of(k) == sign_of(l) {
            let better = match reference_pos {
                None => true,
                Some(best) => omega[r].abs() > omega[best].abs(),
            };
            if better {
                reference_pos = Some(r);
            }
        }
    }
    let reference_pos = reference_pos.expect("equal-sign pair exists for 3+ live eigenspaces");
    let reference = pairs[reference_pos];
    let omega_mn = omega[reference_pos];
    let den = &exact_value(reference.0) - &exact_value(reference.1);

    let mut theta = Vec::new();
    let mut theta_f64 = Vec::new();
    let mut parity = Vec::new();
    for (r, &(k, l)) in pairs.iter().enumerate() {
        if r == reference_pos {
            continue;
        }
        let num = (&exact_value(k) - &exact_value(l)).mul_int(2);
        let th = num.div(&den);
        theta_f64.push(th.to_f64());
        theta.push(th);
        parity.push(if sign_of(k) == sign_of(l) { Parity::Even } else { Parity::Odd });
    }
    let n_bar = theta.len();
    Ok(ConstraintSystem {
        pair: (ta.i, ta.j),
        live,
        signs,
        pairs,
        reference,
        reference_pos,
        omega,
        omega_mn,
        theta,
        theta_f64,
        parity,
        n_bar,
        reordered,
    })
}

/// Searches for a small integer relation `alpha . values = 0`.
///
/// The lattice stacks an identity block over the row of values scaled by
/// 2^96; a genuine relation shows up as a very short vector whose first
/// components are the coefficients. A candidate is accepted only if it
/// verifies at full fixed precision (`|alpha . values| < tol`) and satisfies
/// `max |alpha_i| <= max_coeff`. `None` is evidence, not proof, of
/// independence.
pub fn rational_dependence_search(
    values: &[Fx],
    max_coeff: i64,
    tol: f64,
) -> Result<Option<Vec<BigInt>>> {
    if values.is_empty() {
        return Err(Error::InvalidArgument("dependence search needs at least one value".into()));
    }
    if values.len() == 1 {
        return Ok(if values[0].is_zero() { Some(vec![BigInt::from(1)]) } else { None });
    }
    let m = values.len();
    let mut cols = Vec::with_capacity(m);
    for (j, v) in values.iter().enumerate() {
        let mut col = vec![BigInt::zero(); m + 1];
        col[j] = BigInt::from(1);
        col[m] = v.quantize(crate::diophantine::LATTICE_QUANT_BITS);
        cols.push(col);
    }
    let red = lll_reduce(&cols, 3, 4)?;
    let alpha: Vec<BigInt> = red.basis[0][..m].to_vec();
    if alpha.iter().all(|a| a.is_zero()) {
        return Ok(None);
    }
    if alpha.iter().any(|a| a.abs() > BigInt::from(max_coeff)) {
        return Ok(None);
    }
    // exact verification at 192 fractional bits
    let mut sum = Fx::zero();
    for (a, v) in alpha.iter().zip(values) {
        sum += &Fx::from_mantissa(v.mantissa() * a);
    }
    if sum.abs().to_f64() >= tol {
        return Ok(None);
    }
    Ok(Some(normalize_relation(alpha)))
}

/// Divides by the gcd and makes the first nonzero coefficient positive.
fn normalize_relation(mut alpha: Vec<BigInt>) -> Vec<BigInt> {
    let mut g = BigInt::zero();
    for a in &alpha {
        g = g.gcd(a);
    }
    if !g.is_zero() && g != BigInt::from(1) {
        for a in &mut alpha {
            *a /= &g;
        }
    }
    if let Some(first) = alpha.iter().find(|a| !a.is_zero()) {
        if first.is_negative() {
            for a in &mut alpha {
                *a = -(a as &BigInt);
            }
        }
    }
    alpha
}

/// Classifies a constraint system by searching `{1} union theta`.
pub fn attainability_verdict(
    cs: &ConstraintSystem,
    dep_search_bound: i64,
) -> Result<AttainabilityVerdict> {
    let mut values = Vec::with_capacity(cs.theta.len() + 1);
    values.push(Fx::one());
    values.extend(cs.theta.iter().cloned());
    match rational_dependence_search(&values, dep_search_bound, DEFAULT_DEP_TOL)? {
        Some(alpha) => Ok(AttainabilityVerdict::DependentWithRelation(alpha)),
        None => Ok(AttainabilityVerdict::IndependentEvidence),
    }
}

/// Convenience wrapper: analyze a pair and classify it, mapping the
/// too-few-live-eigenspaces case to `Degenerate`.
pub fn pair_verdict(
    es: &EigenSystem,
    i: usize,
    j: usize,
    dep_search_bound: i64,
) -> Result<AttainabilityVerdict> {
    let ta = crate::itf::analyze_pair(es, i, j, None)?;
    match build_constraints(&ta, es) {
        Ok(cs) => attainability_verdict(&cs, dep_search_bound),
        Err(Error::DegenerateLive { .. }) => Ok(AttainabilityVerdict::Degenerate),
        Err(e) => Err(e),
    }
}
