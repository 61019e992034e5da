//! Transfer times, a-priori accuracy bounds, and decoherence feasibility.
//!
//! A parity-feasible approximation `(p, q)` of the constraint angles aligns
//! the live phases at `t_f = 2q/|omega_mn|`, with probability shortfall
//! controlled a priori by
//!
//! ```text
//! p_max - p(t_f) <= 2|K'| |sin((pi/2) Nbar eps_Da)| ,
//! ```
//!
//! so a target accuracy eps_prob translates into a required Diophantine
//! accuracy and, through the parity-aware Dirichlet bound `eps_Da <=
//! 2/q^(1/Nbar)`, into a minimum denominator
//!
//! ```text
//! q_min = ceil( (pi Nbar / arcsin(eps_prob / 4|K'|))^Nbar ) ,
//! ```
//!
//! which grows like `O(Nbar^Nbar)` and is kept as a big integer (or only as
//! a base-10 logarithm once it stops fitting anything reasonable). Observed
//! minimum transfer times follow a rough power law `t_f = c eps^-alpha`,
//! which combined with a coherence time gives the smallest accuracy worth
//! pursuing, `eps_floor = (c/t_coh)^(1/alpha)`.

use crate::attainability::ConstraintSystem;
use crate::diophantine::DiophantineSolution;
use crate::error::{Error, Result};
use crate::fixed::Fx;
use crate::itf::TransferAnalysis;
use crate::spectra::EigenSystem;
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

/// Largest bit length for which `q_min` is materialized exactly.
pub const Q_MIN_EXACT_BITS: u64 = 1024;

/// A transfer time derived from a Diophantine solution.
#[derive(Clone, Debug)]
pub struct TransferTime {
    /// Alignment time `2q/|omega_mn|`, in units of 1/J.
    pub t: f64,
    /// The denominator that produced it.
    pub q: BigInt,
    /// Transfer probability evaluated at `t`.
    pub achieved_p: f64,
    /// The bound being approached.
    pub p_max: f64,
    /// `1 - achieved_p/p_max`.
    pub relative_gap: f64,
}

/// Evaluates the transfer time of a parity-feasible solution.
///
/// Refuses solutions with parity violations: their alignment times do not
/// approach `p_max` no matter how small the approximation errors are.
pub fn time_from_solution(
    es: &EigenSystem,
    ta: &TransferAnalysis,
    cs: &ConstraintSystem,
    sol: &DiophantineSolution,
) -> Result<TransferTime> {
    if !sol.feasible() {
        return Err(Error::ParityViolation);
    }
    if sol.q.is_zero() || sol.q.is_negative() {
        return Err(Error::InvalidArgument("denominator must be positive".into()));
    }
    let q = sol
        .q
        .to_f64()
        .filter(|q| q.is_finite())
        .ok_or_else(|| Error::InvalidArgument("denominator too large to evaluate a time".into()))?;
    let t = 2.0 * q / cs.omega_mn.abs();
    let achieved_p = crate::itf::transfer_probability(es, ta.i, ta.j, t)?;
    let relative_gap = 1.0 - achieved_p / ta.p_max;
    Ok(TransferTime {
        t,
        q: sol.q.clone(),
        achieved_p,
        p_max: ta.p_max,
        relative_gap,
    })
}

/// Checks the a-priori shortfall bound `2|K'| |sin((pi/2) Nbar e)| < eps/2`.
pub fn error_bound_check(cs: &ConstraintSystem, max_error: f64, eps_prob: f64) -> bool {
    let k_live = cs.live.len() as f64;
    let n_bar = cs.n_bar as f64;
    2.0 * k_live * (std::f64::consts::FRAC_PI_2 * n_bar * max_error).sin().abs() < eps_prob / 2.0
}

/// The guaranteed-accuracy denominator bound for a constraint system.
#[derive(Clone, Debug)]
pub struct QMinBound {
    /// Target probability accuracy.
    pub eps_prob: f64,
    /// Number of constraints after removing the reference.
    pub n_bar: usize,
    /// Number of live eigenspaces `|K'|`.
    pub live: usize,
    /// Largest admissible Diophantine error `(2/(pi Nbar)) arcsin(eps/4|K'|)`.
    pub eps_da_required: f64,
    /// `ceil((pi Nbar / arcsin(eps/4|K'|))^Nbar)`, when it fits 1024 bits.
    pub exact: Option<BigInt>,
    /// Base-10 logarithm of the bound (always available).
    pub log10: f64,
    /// Base-10 logarithm of the small-angle form `(4 pi Nbar |K'| / eps)^Nbar`.
    pub small_angle_log10: f64,
}

/// Computes the minimum denominator guaranteeing accuracy `eps_prob`.
///
/// The parity-aware Dirichlet bound gives `eps_Da <= 2/q^(1/Nbar)`, so any
/// `q >= q_min` paired with a converged parity fix meets the shortfall bound.
pub fn q_min_dirichlet(cs: &ConstraintSystem, eps_prob: f64) -> Result<QMinBound> {
    let live = cs.live.len();
    let n_bar = cs.n_bar;
    let domain = 4.0 * live as f64;
    if !(eps_prob > 0.0 && eps_prob < domain) {
        return Err(Error::InvalidArgument(format!(
            "eps_prob must lie in (0, {domain}) for {live} live eigenspaces"
        )));
    }
    let asin = (eps_prob / domain).asin();
    let base = std::f64::consts::PI * n_bar as f64 / asin;
    let eps_da_required = 2.0 / (std::f64::consts::PI * n_bar as f64) * asin;
    let log10 = n_bar as f64 * base.log10();
    let small_angle_log10 = n_bar as f64 * (4.0 * std::f64::consts::PI * n_bar as f64 * live as f64
        / eps_prob)
        .log10();
    let bits = n_bar as f64 * base.log2();
    let exact = if bits <= Q_MIN_EXACT_BITS as f64 {
        let b = Fx::from_f64(base)
            .ok_or_else(|| Error::InvalidArgument("degenerate arcsine base".into()))?;
        let mut pow = Fx::one();
        for _ in 0..n_bar {
            pow = pow.mul(&b);
        }
        let mut ceil = pow.floor_int();
        if !pow.fract().is_zero() {
            ceil += 1;
        }
        Some(ceil)
    } else {
        None
    };
    Ok(QMinBound {
        eps_prob,
        n_bar,
        live,
        eps_da_required,
        exact,
        log10,
        small_angle_log10,
    })
}

/// Earliest grid time at which `p(t) >= p_max - eps`.
///
/// Scans `t = dt, 2dt, ..., t_max` and returns the first crossing without
/// local refinement, so results are staircase-quantized at `dt`. Returns
/// `None` when the accuracy is not reached within the horizon.
pub fn min_time_for_accuracy(
    es: &EigenSystem,
    i: usize,
    j: usize,
    eps: f64,
    t_max: f64,
    dt: f64,
) -> Result<Option<f64>> {
    if !(eps > 0.0) || !(dt > 0.0) || !(t_max > dt) {
        return Err(Error::InvalidArgument("need eps > 0 and 0 < dt < t_max".into()));
    }
    let ta = crate::itf::analyze_pair(es, i, j, None)?;
    let target = ta.p_max - eps;
    let steps = (t_max / dt).floor() as usize;
    for k in 1..=steps {
        let t = k as f64 * dt;
        if crate::itf::transfer_probability(es, i, j, t)? >= target {
            return Ok(Some(t));
        }
    }
    Ok(None)
}

/// A fitted `t = c eps^-alpha` power law.
#[derive(Clone, Copy, Debug)]
pub struct PowerLawFit {
    pub c: f64,
    pub alpha: f64,
    pub r_squared: f64,
}

/// Least-squares fit of `log t = log c - alpha log eps`.
pub fn fit_power_law(samples: &[(f64, f64)]) -> Result<PowerLawFit> {
    if samples.len() < 2 {
        return Err(Error::InvalidArgument("power-law fit needs at least two samples".into()));
    }
    if samples.iter().any(|&(e, t)| !(e > 0.0) || !(t > 0.0)) {
        return Err(Error::InvalidArgument("power-law samples must be positive".into()));
    }
    let n = samples.len() as f64;
    let xs: Vec<f64> = samples.iter().map(|&(e, _)| e.ln()).collect();
    let ys: Vec<f64> = samples.iter().map(|&(_, t)| t.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("all accuracies equal; slope undefined".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum();
    let r_squared = if ss_tot == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot };
    Ok(PowerLawFit {
        c: intercept.exp(),
        alpha: -slope,
        r_squared,
    })
}

/// Decoherence-limited accuracy floor and the matching conservative time cap.
#[derive(Clone, Copy, Debug)]
pub struct DecoherenceAssessment {
    /// `(c/t_coh)^(1/alpha)`: accuracies well below this are decoherence-wasted.
    pub eps_floor: f64,
    /// Base-10 log of `2/|omega_mn| (pi Nbar / arcsin(eps_floor/4|K'|))^Nbar`.
    pub t_ceiling_log10: f64,
    /// The ceiling itself when it fits an f64.
    pub t_ceiling: Option<f64>,
}

/// Evaluates how far decoherence lets the bound be pursued.
pub fn decoherence_feasibility(
    cs: &ConstraintSystem,
    c: f64,
    alpha: f64,
    t_coh: f64,
) -> Result<DecoherenceAssessment> {
    if !(c > 0.0) || !(alpha > 0.0) || !(t_coh > 0.0) {
        return Err(Error::InvalidArgument("decoherence inputs must be positive".into()));
    }
    let eps_floor = (c / t_coh).powf(1.0 / alpha);
    let qb = q_min_dirichlet(cs, eps_floor.min(4.0 * cs.live.len() as f64 * 0.999_999))?;
    let t_ceiling_log10 = (2.0 / cs.omega_mn.abs()).log10() + qb.log10;
    let t_ceiling = if t_ceiling_log10 < 308.0 {
        Some(10f64.powf(t_ceiling_log10))
    } else {
        None
    };
    Ok(DecoherenceAssessment {
        eps_floor,
        t_ceiling_log10,
        t_ceiling,
    })
}
