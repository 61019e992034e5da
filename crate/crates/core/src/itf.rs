//! Transfer-fidelity bounds from spectral overlaps.
//!
//! For excitation transfer from site i to site j under `H = sum_k lambda_k
//! Pi_k`, the transition amplitude is `f(t) = sum_k exp(-i lambda_k t)
//! <i|Pi_k|j>`. The overlaps are real, so the modulus is maximized when every
//! non-zero term is rotated onto a common ray, giving the bound
//!
//! ```text
//! p_max(i, j) = ( sum_k |<i|Pi_k|j>| )^2 .
//! ```
//!
//! Eigenspaces with `<i|Pi_k|j> = 0` are dark for the pair: they contribute
//! nothing and impose no phase constraint. Whether the bound is attained is a
//! question about simultaneously aligning the live phases and is handled by
//! the attainability module; this module only computes the bound, the sign
//! pattern `s_k = sgn <i|Pi_k|j>`, and time-domain probabilities.

use crate::error::{Error, Result};
use crate::spectra::EigenSystem;
use nalgebra::DMatrix;

/// Overlaps below this magnitude count as dark.
pub const DEFAULT_DARK_TOL: f64 = 1e-10;

/// Spectral data of one ordered site pair.
#[derive(Clone, Debug)]
pub struct TransferAnalysis {
    /// Source site, 1-based.
    pub i: usize,
    /// Target site, 1-based.
    pub j: usize,
    /// `<i|Pi_k|j>` per distinct eigenvalue, ascending order.
    pub overlaps: Vec<f64>,
    /// Sign of each overlap; 0 marks a dark eigenspace.
    pub signs: Vec<i8>,
    /// Dark flags, `|overlap| < dark_tol`.
    pub dark: Vec<bool>,
    /// Threshold used for the dark flags.
    pub dark_tol: f64,
    /// `(sum_k |overlap_k|)^2`.
    pub p_max: f64,
}

impl TransferAnalysis {
    /// Indices of the eigenvalues that carry amplitude for this pair.
    pub fn live_indices(&self) -> Vec<usize> {
        (0..self.overlaps.len()).filter(|&k| !self.dark[k]).collect()
    }
}

/// Overlap spectrum, sign pattern, and `p_max` for the pair `(i, j)`.
pub fn analyze_pair(
    es: &EigenSystem,
    i: usize,
    j: usize,
    dark_tol: Option<f64>,
) -> Result<TransferAnalysis> {
    let tol = dark_tol.unwrap_or(DEFAULT_DARK_TOL);
    for &node in &[i, j] {
        if node == 0 || node > es.n {
            return Err(Error::NodeOutOfRange { index: node, n: es.n });
        }
    }
    let overlaps: Vec<f64> = es.projectors.iter().map(|p| p[(i - 1, j - 1)]).collect();
    let dark: Vec<bool> = overlaps.iter().map(|o| o.abs() < tol).collect();
    let signs: Vec<i8> = overlaps
        .iter()
        .zip(&dark)
        .map(|(o, &d)| if d { 0 } else if *o > 0.0 { 1 } else { -1 })
        .collect();
    let amplitude: f64 = overlaps.iter().map(|o| o.abs()).sum();
    Ok(TransferAnalysis {
        i,
        j,
        overlaps,
        signs,
        dark,
        dark_tol: tol,
        p_max: amplitude * amplitude,
    })
}

/// `p_max` on a uniform ring of N sites as an explicit harmonic sum.
///
/// With gap `g = j - i` the projector overlaps are `1/N` at `k = 0`,
/// `(2/N) cos(2 pi k g / N)` for the degenerate pairs, and `(-1)^g / N` at
/// `k = N/2` for even N, so
///
/// ```text
/// sqrt(p_max) = 1/N + (2/N) sum_{k=1}^{ceil(N/2)-1} |cos(2 pi k g / N)|
///               + [N even] 1/N .
/// ```
pub fn ring_pmax_closed_form(n: usize, i: usize, j: usize) -> f64 {
    assert!(n >= 3 && i >= 1 && i <= n && j >= 1 && j <= n);
    let g = (j as i64 - i as i64).rem_euclid(n as i64) as f64;
    let mut amp = 1.0 / n as f64;
    let kmax = (n + 1) / 2;
    for k in 1..kmax {
        amp += 2.0 / n as f64 * (2.0 * std::f64::consts::PI * k as f64 * g / n as f64).cos().abs();
    }
    if n % 2 == 0 {
        amp += 1.0 / n as f64;
    }
    amp * amp
}

/// Transfer probability `|f(t)|^2` at time `t`.
pub fn transfer_probability(es: &EigenSystem, i: usize, j: usize, t: f64) -> Result<f64> {
    let ta = analyze_pair(es, i, j, None)?;
    Ok(probability_from_overlaps(&ta.overlaps, &es.values, t))
}

/// `|sum_k o_k exp(-i lambda_k t)|^2` without re-deriving overlaps.
pub fn probability_from_overlaps(overlaps: &[f64], values: &[f64], t: f64) -> f64 {
    let mut re = 0.0;
    let mut im = 0.0;
    for (o, lam) in overlaps.iter().zip(values) {
        let phase = lam * t;
        re += o * phase.cos();
        im -= o * phase.sin();
    }
    re * re + im * im
}

/// `p_max` for every ordered pair; the diagonal is identically 1.
pub fn pmax_matrix(es: &EigenSystem, dark_tol: Option<f64>) -> Result<DMatrix<f64>> {
    let n = es.n;
    let mut m = DMatrix::zeros(n, n);
    // p_max(i, j) = p_max(j, i) holds exactly, so mirror rather than
    // recompute: recomputation costs double and lets rounding noise break
    // bitwise symmetry downstream (the metric audit checks it exactly).
    for i in 1..=n {
        for j in i..=n {
            let p = analyze_pair(es, i, j, dark_tol)?.p_max;
            m[(i - 1, j - 1)] = p;
            m[(j - 1, i - 1)] = p;
        }
    }
    Ok(m)
}

/// Best probability found on a time grid, with local refinement.
#[derive(Clone, Copy, Debug)]
pub struct ScanResult {
    pub t: f64,
    pub p: f64,
}

/// Scans `p(t)` on `[0, t_max]` with step `dt`, then refines the best grid
/// point by golden-section search in its neighboring interval.
pub fn scan_max_probability(
    es: &EigenSystem,
    i: usize,
    j: usize,
    t_max: f64,
    dt: f64,
) -> Result<ScanResult> {
    if !(t_max > 0.0) || !(dt > 0.0) || dt > t_max {
        return Err(Error::InvalidArgument(format!(
            "need 0 < dt <= t_max, got dt = {dt}, t_max = {t_max}"
        )));
    }
    let ta = analyze_pair(es, i, j, None)?;
    let p = |t: f64| probability_from_overlaps(&ta.overlaps, &es.values, t);
    let steps = (t_max / dt).floor() as usize;
    let mut best_t = 0.0;
    let mut best_p = p(0.0);
    for s in 1..=steps {
        let t = s as f64 * dt;
        let pt = p(t);
        if pt > best_p {
            best_p = pt;
            best_t = t;
        }
    }
    // golden-section refinement around the best grid point
    let inv_phi = 0.618_033_988_749_894_9;
    let mut a = (best_t - dt).max(0.0);
    let mut b = (best_t + dt).min(t_max);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut pc = p(c);
    let mut pd = p(d);
    for _ in 0..50 {
        if pc > pd {
            b = d;
            d = c;
            pd = pc;
            c = b - inv_phi * (b - a);
            pc = p(c);
        } else {
            a = c;
            c = d;
            pc = pd;
            d = a + inv_phi * (b - a);
            pd = p(d);
        }
    }
    let t_ref = 0.5 * (a + b);
    let p_ref = p(t_ref);
    if p_ref > best_p {
        Ok(ScanResult { t: t_ref, p: p_ref })
    } else {
        Ok(ScanResult { t: best_t, p: best_p })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{CouplingKind, SpinNetwork};
    use crate::spectra::eigensystem;
    use approx::assert_abs_diff_eq;

    #[test]
    fn closed_form_matches_projector_sum_on_rings() {
        for n in [3usize, 4, 5, 6, 7, 10, 11, 24] {
            let es = eigensystem(&SpinNetwork::ring(n, CouplingKind::Xx).unwrap()).unwrap();
            for j in 1..=n {
                let ta = analyze_pair(&es, 1, j, None).unwrap();
                let cf = ring_pmax_closed_form(n, 1, j);
                assert_abs_diff_eq!(ta.p_max, cf, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn same_site_bound_is_one() {
        let es = eigensystem(&SpinNetwork::ring(9, CouplingKind::Heisenberg).unwrap()).unwrap();
        for i in 1..=9 {
            assert_abs_diff_eq!(analyze_pair(&es, i, i, None).unwrap().p_max, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn chain_mirror_pairs_reach_one() {
        for n in [2usize, 3, 5, 8] {
            let es = eigensystem(&SpinNetwork::chain(n, CouplingKind::Xx).unwrap()).unwrap();
            for i in 1..=n {
                let ta = analyze_pair(&es, i, n + 1 - i, None).unwrap();
                assert_abs_diff_eq!(ta.p_max, 1.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn probability_never_exceeds_bound() {
        let es = eigensystem(&SpinNetwork::ring(7, CouplingKind::Xx).unwrap()).unwrap();
        let ta = analyze_pair(&es, 1, 3, None).unwrap();
        for s in 0..2000 {
            let t = s as f64 * 0.173;
            let p = transfer_probability(&es, 1, 3, t).unwrap();
            assert!(p <= ta.p_max + 1e-12, "p({t}) = {p} exceeds {}", ta.p_max);
        }
    }

    #[test]
    fn probability_at_zero_is_kronecker() {
        let es = eigensystem(&SpinNetwork::chain(6, CouplingKind::Xx).unwrap()).unwrap();
        assert_abs_diff_eq!(transfer_probability(&es, 2, 2, 0.0).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(transfer_probability(&es, 2, 5, 0.0).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn dark_states_are_flagged_on_even_rings() {
        // ring 4, gap 1: the k = 1 overlap carries cos(pi/2) = 0 and is dark
        let es = eigensystem(&SpinNetwork::ring(4, CouplingKind::Xx).unwrap()).unwrap();
        let ta = analyze_pair(&es, 1, 2, None).unwrap();
        assert_eq!(ta.dark.iter().filter(|&&d| d).count(), 1);
        assert_eq!(ta.signs.iter().filter(|&&s| s == 0).count(), 1);
    }

    #[test]
    fn scan_finds_perfect_chain_transfer() {
        // two-site chain flips in time pi/2
        let es = eigensystem(&SpinNetwork::chain(2, CouplingKind::Xx).unwrap()).unwrap();
        let r = scan_max_probability(&es, 1, 2, 4.0, 0.01).unwrap();
        assert_abs_diff_eq!(r.p, 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(r.t, std::f64::consts::FRAC_PI_2, epsilon = 1e-6);
    }
}
