//! Spectral decompositions of single-excitation Hamiltonians.
//!
//! Transfer bounds depend only on the distinct eigenvalues and their
//! eigenprojectors, so the public object here is an `EigenSystem`: ascending
//! distinct values `lambda_1 < ... < lambda_m` with multiplicities and the
//! projectors `Pi_k` satisfying `H = sum_k lambda_k Pi_k`.
//!
//! Uniform unbiased networks get closed forms. A ring of N sites is
//! circulant: `lambda_k = 2J cos(2 pi k / N)` for `k = 0..floor(N/2)`, with
//! `Pi_k(i,j) = (2/N) cos(2 pi k (i-j) / N)` for the doubly degenerate pairs,
//! `1/N` for `k = 0`, and `(-1)^(i-j)/N` for `k = N/2` at even N. An XX chain
//! of n sites has `lambda_k = 2J cos(pi k / (n+1))` with simple eigenvectors
//! `v_k(i) = sqrt(2/(n+1)) sin(pi k i / (n+1))`. Everything else goes through
//! a cyclic Jacobi diagonalization followed by eigenvalue clustering.

use crate::error::{Error, Result};
use crate::fixed::Fx;
use crate::network::{SpinNetwork, StructureTag};
use nalgebra::DMatrix;

/// How an eigensystem was obtained; analytic sources carry enough to rebuild
/// eigenvalues at arbitrary precision.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SpectrumSource {
    AnalyticRing { n: usize, coupling: f64, heisenberg: bool },
    AnalyticChain { n: usize, coupling: f64 },
    Numeric,
}

/// Distinct eigenvalues (ascending) with multiplicities and projectors.
#[derive(Clone, Debug)]
pub struct EigenSystem {
    pub n: usize,
    pub values: Vec<f64>,
    pub multiplicities: Vec<usize>,
    pub projectors: Vec<DMatrix<f64>>,
    pub source: SpectrumSource,
}

impl EigenSystem {
    /// Number of distinct eigenvalues.
    pub fn distinct(&self) -> usize {
        self.values.len()
    }

    /// Eigenvalue at 192 fractional bits when the source is analytic.
    ///
    /// Index follows `values` (ascending). Rings map `idx` to harmonic
    /// `k = floor(N/2) - idx`; chains to `k = n - idx`.
    pub fn value_exact(&self, idx: usize) -> Option<Fx> {
        match self.source {
            SpectrumSource::AnalyticRing { n, coupling, heisenberg } => {
                let k = n / 2 - idx;
                let mut base = Fx::cos_pi_ratio(2 * k as i64, n as i64).mul_int(2);
                if heisenberg {
                    base += &Fx::one();
                }
                Some(base.mul(&Fx::from_f64(coupling)?))
            }
            SpectrumSource::AnalyticChain { n, coupling } => {
                let k = n - idx;
                let base = Fx::cos_pi_ratio(k as i64, (n + 1) as i64).mul_int(2);
                Some(base.mul(&Fx::from_f64(coupling)?))
            }
            SpectrumSource::Numeric => None,
        }
    }

    /// `sum_k lambda_k Pi_k`, for consistency checks.
    pub fn reconstruct(&self) -> DMatrix<f64> {
        let mut h = DMatrix::zeros(self.n, self.n);
        for (lam, p) in self.values.iter().zip(&self.projectors) {
            h += p * *lam;
        }
        h
    }
}

/// Default relative gap under which numeric eigenvalues are merged.
pub const DEFAULT_CLUSTER_TOL_REL: f64 = 1e-9;
/// Maximum Jacobi sweeps before giving up.
pub const MAX_JACOBI_SWEEPS: usize = 100;

/// Eigensystem of a network, analytic when the structure permits.
pub fn eigensystem(net: &SpinNetwork) -> Result<EigenSystem> {
    eigensystem_with(net, None)
}

/// Same as [`eigensystem`] with an explicit clustering tolerance for the
/// numeric fallback (analytic spectra are exact and ignore it).
pub fn eigensystem_with(net: &SpinNetwork, cluster_tol: Option<f64>) -> Result<EigenSystem> {
    let h = net.hamiltonian();
    match h.tag {
        StructureTag::CirculantRing { n, coupling, heisenberg } => {
            Ok(ring_eigensystem(n, coupling, heisenberg))
        }
        StructureTag::ToeplitzChain { n, coupling, heisenberg: false } => {
            Ok(chain_eigensystem(n, coupling))
        }
        _ => numeric_eigensystem(&h.matrix, cluster_tol),
    }
}

/// Closed-form eigensystem of a uniform ring.
pub fn ring_eigensystem(n: usize, coupling: f64, heisenberg: bool) -> EigenSystem {
    let shift = if heisenberg { coupling } else { 0.0 };
    let kmax = n / 2;
    let mut values = Vec::with_capacity(kmax + 1);
    let mut multiplicities = Vec::with_capacity(kmax + 1);
    let mut projectors = Vec::with_capacity(kmax + 1);
    // ascending eigenvalues correspond to descending harmonics
    for k in (0..=kmax).rev() {
        let angle = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
        values.push(2.0 * coupling * angle.cos() + shift);
        let double = k != 0 && !(n % 2 == 0 && k == n / 2);
        multiplicities.push(if double { 2 } else { 1 });
        let proj = DMatrix::from_fn(n, n, |i, j| {
            let d = i as f64 - j as f64;
            if k == 0 {
                1.0 / n as f64
            } else if !double {
                // k = N/2 at even N: alternating signs
                if (i + j) % 2 == 0 { 1.0 / n as f64 } else { -1.0 / n as f64 }
            } else {
                2.0 / n as f64 * (2.0 * std::f64::consts::PI * k as f64 * d / n as f64).cos()
            }
        });
        projectors.push(proj);
    }
    EigenSystem {
        n,
        values,
        multiplicities,
        projectors,
        source: SpectrumSource::AnalyticRing { n, coupling, heisenberg },
    }
}

/// Closed-form eigensystem of a uniform XX chain.
pub fn chain_eigensystem(n: usize, coupling: f64) -> EigenSystem {
    let mut values = Vec::with_capacity(n);
    let mut projectors = Vec::with_capacity(n);
    let norm = 2.0 / (n as f64 + 1.0);
    for k in (1..=n).rev() {
        let angle = std::f64::consts::PI * k as f64 / (n as f64 + 1.0);
        values.push(2.0 * coupling * angle.cos());
        let proj = DMatrix::from_fn(n, n, |i, j| {
            let a = (angle * (i as f64 + 1.0)).sin();
            let b = (angle * (j as f64 + 1.0)).sin();
            norm * a * b
        });
        projectors.push(proj);
    }
    EigenSystem {
        n,
        values,
        multiplicities: vec![1; n],
        projectors,
        source: SpectrumSource::AnalyticChain { n, coupling },
    }
}

/// Numeric eigensystem with eigenvalue clustering.
///
/// `cluster_tol` merges eigenvalues whose gap to the previous cluster member
/// is below it; the default is `1e-9 * max |lambda|`.
pub fn numeric_eigensystem(h: &DMatrix<f64>, cluster_tol: Option<f64>) -> Result<EigenSystem> {
    let n = h.nrows();
    if n == 0 || h.ncols() != n {
        return Err(Error::InvalidNetwork("hamiltonian must be square and nonempty".into()));
    }
    let (mut eigvals, vecs) = jacobi_eigen(h, MAX_JACOBI_SWEEPS)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eigvals[a].total_cmp(&eigvals[b]));
    eigvals = order.iter().map(|&i| eigvals[i]).collect();
    let max_abs = eigvals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let tol = cluster_tol.unwrap_or(DEFAULT_CLUSTER_TOL_REL * max_abs);

    let mut values = Vec::new();
    let mut multiplicities = Vec::new();
    let mut projectors: Vec<DMatrix<f64>> = Vec::new();
    let mut cluster_sum = 0.0;
    let mut cluster_count = 0usize;
    let mut cluster_proj = DMatrix::zeros(n, n);
    let mut last = f64::NEG_INFINITY;
    for (pos, &lam) in eigvals.iter().enumerate() {
        if cluster_count > 0 && lam - last > tol {
            values.push(cluster_sum / cluster_count as f64);
            multiplicities.push(cluster_count);
            projectors.push(std::mem::replace(&mut cluster_proj, DMatrix::zeros(n, n)));
            cluster_sum = 0.0;
            cluster_count = 0;
        }
        let v = vecs.column(order[pos]);
        cluster_proj += v * v.transpose();
        cluster_sum += lam;
        cluster_count += 1;
        last = lam;
    }
    values.push(cluster_sum / cluster_count as f64);
    multiplicities.push(cluster_count);
    projectors.push(cluster_proj);

    Ok(EigenSystem {
        n,
        values,
        multiplicities,
        projectors,
        source: SpectrumSource::Numeric,
    })
}

/// Cyclic Jacobi diagonalization of a symmetric matrix.
///
/// Returns unsorted eigenvalues and the orthogonal matrix whose columns are
/// the corresponding eigenvectors.
pub fn jacobi_eigen(h: &DMatrix<f64>, max_sweeps: usize) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let n = h.nrows();
    let mut a = h.clone();
    let mut v = DMatrix::<f64>::identity(n, n);
    if n == 1 {
        return Ok((vec![a[(0, 0)]], v));
    }
    let fro = a.norm();
    let target = f64::EPSILON * fro * n as f64;
    for _ in 0..max_sweeps {
        let off: f64 = (0..n)
            .flat_map(|p| ((p + 1)..n).map(move |q| (p, q)))
            .map(|(p, q)| a[(p, q)] * a[(p, q)])
            .sum::<f64>()
            .sqrt()
            * std::f64::consts::SQRT_2;
        if off <= target || off == 0.0 {
            let vals = (0..n).map(|i| a[(i, i)]).collect();
            return Ok((vals, v));
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                // rotation annihilating a[p][q], stable form
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for i in 0..n {
                    let aip = a[(i, p)];
                    let aiq = a[(i, q)];
                    a[(i, p)] = c * aip - s * aiq;
                    a[(i, q)] = s * aip + c * aiq;
                }
                for j in 0..n {
                    let apj = a[(p, j)];
                    let aqj = a[(q, j)];
                    a[(p, j)] = c * apj - s * aqj;
                    a[(q, j)] = s * apj + c * aqj;
                }
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                for i in 0..n {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = c * vip - s * viq;
                    v[(i, q)] = s * vip + c * viq;
                }
            }
        }
    }
    let off: f64 = (0..n)
        .flat_map(|p| ((p + 1)..n).map(move |q| (p, q)))
        .map(|(p, q)| a[(p, q)] * a[(p, q)])
        .sum::<f64>()
        .sqrt();
    Err(Error::EigenConvergence { max_sweeps, off_norm: off })
}

/// Non-strict interlacing of two ascending distinct-value sequences.
///
/// `parent` is the longer sequence (or, at equal lengths, the one expected to
/// sit inside): with `m = parent.len()` and `child.len() = m - 1` this checks
/// `parent[i] <= child[i] <= parent[i+1]`; at equal lengths it checks
/// `child[i] <= parent[i] <= child[i+1]`. Returns the first violating index.
pub fn interlacing_check(parent: &[f64], child: &[f64], tol: f64) -> std::result::Result<(), usize> {
    let m = parent.len();
    if child.len() + 1 == m {
        for i in 0..child.len() {
            if !(parent[i] - tol <= child[i] && child[i] <= parent[i + 1] + tol) {
                return Err(i);
            }
        }
        Ok(())
    } else if child.len() == m {
        for i in 0..m {
            let upper = if i + 1 < m { child[i + 1] + tol } else { f64::INFINITY };
            if !(child[i] - tol <= parent[i] && parent[i] <= upper) {
                return Err(i);
            }
        }
        Ok(())
    } else {
        Err(usize::MAX)
    }
}
