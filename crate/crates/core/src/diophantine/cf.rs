//! Continued fractions, convergents, and semiconvergents.
//!
//! Expansion runs on 192-bit fixed point. Because the input is itself a
//! rounded value, partial quotients stop being trustworthy once the residual
//! drops below the quantization noise; expansion then stops with
//! `truncated = true`. A residual that is exactly zero means the input was a
//! dyadic rational and the finite expansion is complete.
//!
//! Consecutive convergents `p_{k-1}/q_{k-1}, p_k/q_k` always satisfy
//! `p_k q_{k-1} - p_{k-1} q_k = (-1)^(k-1)`; their mediant
//! `(p_{k-1}+p_k)/(q_{k-1}+q_k)` is the classic way to trade a little
//! accuracy for a different numerator parity.

use crate::error::{Error, Result};
use crate::fixed::{Fx, FRAC_BITS};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Residuals below 2^-96 are artifacts of the input quantization.
const RESIDUAL_TRUST_BITS: u32 = 96;

/// Partial quotients of a real number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContinuedFraction {
    /// `[a0; a1, a2, ...]`.
    pub terms: Vec<BigInt>,
    /// True if expansion stopped at the precision floor rather than at an
    /// exact zero residual.
    pub truncated: bool,
}

/// A rational approximation `p/q` with `q >= 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Convergent {
    pub p: BigInt,
    pub q: BigInt,
}

/// Continued-fraction expansion of `x` with at most `max_terms` quotients.
///
/// Runs the Euclidean algorithm exactly on the fixed-point mantissa, so a
/// representable rational expands completely with no rounding drift. The
/// expansion of an irrational stops once the current fractional part falls
/// below the trust floor.
pub fn continued_fraction(x: &Fx, max_terms: usize) -> ContinuedFraction {
    use num_integer::Integer;
    let mut terms = Vec::new();
    let mut num = x.mantissa().clone();
    let mut den = BigInt::one() << FRAC_BITS;
    for _ in 0..max_terms.max(1) {
        let (a, r) = num.div_mod_floor(&den);
        terms.push(a);
        if r.is_zero() {
            return ContinuedFraction { terms, truncated: false };
        }
        // fractional part r/den below 2^-96: artifact territory
        if (&r << RESIDUAL_TRUST_BITS) < den {
            return ContinuedFraction { terms, truncated: true };
        }
        num = std::mem::replace(&mut den, r);
    }
    ContinuedFraction { terms, truncated: true }
}

impl ContinuedFraction {
    /// Convergents `p_k/q_k` by the three-term recurrence
    /// `h_k = a_k h_{k-1} + h_{k-2}` with `h_{-1} = 1, h_{-2} = 0` (and the
    /// mirrored seeds for the denominators).
    pub fn convergents(&self) -> Vec<Convergent> {
        let mut out = Vec::with_capacity(self.terms.len());
        let mut p_prev2 = BigInt::zero();
        let mut p_prev1 = BigInt::one();
        let mut q_prev2 = BigInt::one();
        let mut q_prev1 = BigInt::zero();
        for a in &self.terms {
            let p_new = a * &p_prev1 + &p_prev2;
            let q_new = a * &q_prev1 + &q_prev2;
            p_prev2 = std::mem::replace(&mut p_prev1, p_new);
            q_prev2 = std::mem::replace(&mut q_prev1, q_new);
            out.push(Convergent { p: p_prev1.clone(), q: q_prev1.clone() });
        }
        out
    }
}

/// Mediant of two consecutive convergents.
///
/// Demands `|p1 q2 - p2 q1| = 1` (the unimodularity that makes the mediant a
/// best approximation between the two) and errors otherwise.
pub fn semiconvergent(a: &Convergent, b: &Convergent) -> Result<Convergent> {
    let cross = (&a.p * &b.q - &b.p * &a.q).abs();
    if !cross.is_one() {
        return Err(Error::InvalidArgument(format!(
            "not consecutive convergents: |p1 q2 - p2 q1| = {cross}"
        )));
    }
    Ok(Convergent { p: &a.p + &b.p, q: &a.q + &b.q })
}

/// Largest-denominator convergent of `x` with `q <= budget`, together with
/// the full list up to that point.
pub fn convergents_within(x: &Fx, budget: &BigInt, max_terms: usize) -> Vec<Convergent> {
    let cf = continued_fraction(x, max_terms);
    cf.convergents()
        .into_iter()
        .take_while(|c| &c.q <= budget)
        .collect()
}
