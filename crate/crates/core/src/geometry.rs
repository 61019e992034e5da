//! Transfer-infidelity distances and their geometry.
//!
//! The best-case transfer probabilities induce a prametric
//!
//! ```text
//! d(i,j) = -ln p_max(i,j) ,
//! ```
//!
//! which on odd uniform rings is a genuine metric, and on even rings fails
//! separation exactly at antipodal pairs (where `p_max = 1`): identifying
//! each node with its antipode restores a metric. When the ring size is a
//! prime `p` (or twice one, after identification) all pairwise distances
//! collapse to a single constant `c_p`, making the ring a uniform finite
//! metric space isometrically embeddable in a sphere of curvature
//!
//! ```text
//! kappa = ( arccos(-1/(p-1)) / c_p )^2 .
//! ```
//!
//! As `N` grows, off-diagonal amplitudes tend to `2/pi`, so distances
//! approach `2 ln(pi/2) ~ 0.9032`.

use crate::error::{Error, Result};
use nalgebra::DMatrix;

/// Tolerance used by the separation axiom and the uniformity test.
pub const SEPARATION_TOL: f64 = 1e-9;
/// Slack allowed in triangle-inequality checks.
pub const TRIANGLE_TOL: f64 = 1e-9;

/// Distances with bookkeeping for unreachable (zero-probability) pairs.
#[derive(Clone, Debug)]
pub struct DistanceMatrix {
    pub n: usize,
    /// `-ln p_max`, with `f64::INFINITY` marking unreachable pairs.
    pub d: DMatrix<f64>,
    /// Pairs `(i, j)`, 0-based, with `p_max = 0`.
    pub unreachable: Vec<(usize, usize)>,
}

/// Elementwise `-ln` of a probability-bound matrix.
pub fn distance_matrix(pmax: &DMatrix<f64>) -> Result<DistanceMatrix> {
    if pmax.nrows() != pmax.ncols() {
        return Err(Error::InvalidArgument("probability matrix must be square".into()));
    }
    let n = pmax.nrows();
    let mut d = DMatrix::zeros(n, n);
    let mut unreachable = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let p = pmax[(i, j)];
            if !(0.0..=1.0 + 1e-12).contains(&p) {
                return Err(Error::InvalidArgument(format!(
                    "p_max({i},{j}) = {p} outside [0, 1]"
                )));
            }
            d[(i, j)] = if p == 0.0 {
                unreachable.push((i, j));
                f64::INFINITY
            } else {
                -p.min(1.0).ln()
            };
        }
    }
    Ok(DistanceMatrix { n, d, unreachable })
}

/// Worst violating triple of a triangle check, with its deviation.
#[derive(Clone, Copy, Debug)]
pub struct TriangleWitness {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    /// `d(i,j) - d(i,k) - d(k,j)`, positive when violated.
    pub excess: f64,
}

/// Axiom-by-axiom audit of a distance matrix.
#[derive(Clone, Debug)]
pub struct MetricAudit {
    pub nonneg: bool,
    /// Most negative entry, when nonneg fails.
    pub nonneg_witness: Option<(usize, usize, f64)>,
    pub identity: bool,
    pub identity_witness: Option<(usize, f64)>,
    pub symmetry: bool,
    pub symmetry_witness: Option<(usize, usize, f64)>,
    pub separation: bool,
    /// All off-diagonal pairs with `d < SEPARATION_TOL`.
    pub separation_failures: Vec<(usize, usize)>,
    pub triangle: bool,
    pub triangle_witness: Option<TriangleWitness>,
}

impl MetricAudit {
    pub fn all_pass(&self) -> bool {
        self.nonneg && self.identity && self.symmetry && self.separation && self.triangle
    }
}

/// Exhaustively checks the metric axioms.
///
/// Unreachable (infinite) entries never violate nonnegativity or the
/// triangle inequality; they do violate nothing else either, since an
/// infinite distance separates points trivially.
pub fn metric_audit(d: &DMatrix<f64>) -> MetricAudit {
    metric_audit_with(d, SEPARATION_TOL, TRIANGLE_TOL)
}

/// [`metric_audit`] with explicit separation and triangle tolerances.
pub fn metric_audit_with(d: &DMatrix<f64>, separation_tol: f64, triangle_tol: f64) -> MetricAudit {
    let n = d.nrows();
    let mut a = MetricAudit {
        nonneg: true,
        nonneg_witness: None,
        identity: true,
        identity_witness: None,
        symmetry: true,
        symmetry_witness: None,
        separation: true,
        separation_failures: Vec::new(),
        triangle: true,
        triangle_witness: None,
    };
    for i in 0..n {
        if d[(i, i)].abs() > 1e-10 {
            a.identity = false;
            let dev = d[(i, i)];
            if a.identity_witness.map_or(true, |(_, w)| dev.abs() > w.abs()) {
                a.identity_witness = Some((i, dev));
            }
        }
        for j in 0..n {
            let v = d[(i, j)];
            if v < -1e-12 {
                a.nonneg = false;
                if a.nonneg_witness.map_or(true, |(_, _, w)| v < w) {
                    a.nonneg_witness = Some((i, j, v));
                }
            }
            let dev = if v.is_infinite() && d[(j, i)].is_infinite() {
                0.0
            } else {
                v - d[(j, i)]
            };
            if dev != 0.0 {
                a.symmetry = false;
                if a.symmetry_witness.map_or(true, |(_, _, w)| dev.abs() > w.abs()) {
                    a.symmetry_witness = Some((i, j, dev));
                }
            }
            if i != j && v < separation_tol {
                a.separation = false;
                a.separation_failures.push((i, j));
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            if d[(i, j)].is_infinite() {
                continue;
            }
            for k in 0..n {
                if d[(i, k)].is_infinite() || d[(k, j)].is_infinite() {
                    continue;
                }
                let excess = d[(i, j)] - d[(i, k)] - d[(k, j)];
                if excess > triangle_tol {
                    a.triangle = false;
                    if a.triangle_witness.map_or(true, |w| excess > w.excess) {
                        a.triangle_witness = Some(TriangleWitness { i, j, k, excess });
                    }
                }
            }
        }
    }
    a
}

/// An even ring folded onto its antipodal classes.
#[derive(Clone, Debug)]
pub struct AntipodalQuotient {
    /// Node classes `{i, i + N/2}`, 0-based members.
    pub classes: Vec<[usize; 2]>,
    /// Distance matrix between classes.
    pub d: DMatrix<f64>,
}

/// Identifies antipodal nodes of an even ring.
///
/// Distances descend to the quotient because `p_max` depends on the gap only
/// through `|cos(2 pi k g / N)|`, which is invariant under `g -> g + N/2`;
/// the class distance takes the minimum over representatives to absorb
/// floating-point noise.
pub fn antipodal_quotient(dm: &DistanceMatrix) -> Result<AntipodalQuotient> {
    let n = dm.n;
    if n % 2 != 0 {
        return Err(Error::InvalidArgument(format!(
            "antipodal identification needs an even ring, got N = {n}"
        )));
    }
    let half = n / 2;
    let classes: Vec<[usize; 2]> = (0..half).map(|i| [i, i + half]).collect();
    let mut d = DMatrix::zeros(half, half);
    for a in 0..half {
        for b in 0..half {
            let mut best = f64::INFINITY;
            for &i in &classes[a] {
                for &j in &classes[b] {
                    best = best.min(dm.d[(i, j)]);
                }
            }
            d[(a, b)] = best;
        }
    }
    Ok(AntipodalQuotient { classes, d })
}

/// Returns the common off-diagonal distance if there is one.
pub fn uniformity_check(d: &DMatrix<f64>) -> Option<f64> {
    let n = d.nrows();
    let mut sum = 0.0;
    let mut count = 0usize;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                if !d[(i, j)].is_finite() {
                    return None;
                }
                sum += d[(i, j)];
                count += 1;
            }
        }
    }
    if count == 0 {
        return None;
    }
    let mean = sum / count as f64;
    for i in 0..n {
        for j in 0..n {
            if i != j && (d[(i, j)] - mean).abs() > SEPARATION_TOL {
                return None;
            }
        }
    }
    Some(mean)
}

/// Trial-division primality, adequate for ring sizes.
pub fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= n {
        if n % k == 0 {
            return false;
        }
        k += 1;
    }
    true
}

/// Whether ring distances are expected to be uniform: N prime or twice one.
pub fn ring_uniformity_predicate(n: usize) -> bool {
    is_prime(n) || (n % 2 == 0 && is_prime(n / 2))
}

/// Curvature of the sphere a uniform p-point metric space embeds into.
#[derive(Clone, Copy, Debug)]
pub struct EmbeddingCurvature {
    /// Upper bound form of the embedding inequality.
    pub kappa_max: f64,
    /// Curvature of the irreducible (minimal-radius) embedding.
    pub kappa_irreducible: f64,
    /// Sphere radius `1/sqrt(kappa)` of the irreducible embedding.
    pub radius: f64,
}

/// `kappa = (arccos(-1/(p-1)) / c_p)^2` for a uniform p-point space.
pub fn embedding_curvature(c_p: f64, p: usize) -> Result<EmbeddingCurvature> {
    if !is_prime(p) || p < 3 {
        return Err(Error::InvalidArgument(format!(
            "uniformity is only guaranteed for odd prime rings, got {p}"
        )));
    }
    if !(c_p > 0.0) {
        return Err(Error::InvalidArgument("uniform distance must be positive".into()));
    }
    let angle = (-1.0 / (p as f64 - 1.0)).acos();
    let kappa = (angle / c_p) * (angle / c_p);
    Ok(EmbeddingCurvature {
        kappa_max: kappa,
        kappa_irreducible: kappa,
        radius: 1.0 / kappa.sqrt(),
    })
}

/// Full geometric description of one network's bound matrix.
#[derive(Clone, Debug)]
pub struct GeometryReport {
    pub distances: DistanceMatrix,
    pub audit: MetricAudit,
    /// Present for even sizes: the folded space and its audit.
    pub quotient: Option<(AntipodalQuotient, MetricAudit)>,
    /// Common off-diagonal distance (post-identification for even sizes).
    pub uniform: Option<f64>,
    /// Whether N = p or 2p predicts uniformity.
    pub uniform_predicted: bool,
    /// Sphere embedding, when the space is uniform over a prime node count.
    pub curvature: Option<EmbeddingCurvature>,
    /// Largest off-diagonal deviation `|d - 2 ln(pi/2)|` over finite entries.
    pub asymptotic_gap: f64,
}

/// Builds the report for a probability-bound matrix on `n` ring nodes.
pub fn report(pmax: &DMatrix<f64>, ring: bool) -> Result<GeometryReport> {
    report_with(pmax, ring, SEPARATION_TOL, TRIANGLE_TOL)
}

/// [`report`] with explicit audit tolerances.
pub fn report_with(
    pmax: &DMatrix<f64>,
    ring: bool,
    separation_tol: f64,
    triangle_tol: f64,
) -> Result<GeometryReport> {
    let distances = distance_matrix(pmax)?;
    let audit = metric_audit_with(&distances.d, separation_tol, triangle_tol);
    let n = distances.n;
    let quotient = if ring && n % 2 == 0 && n >= 4 {
        let q = antipodal_quotient(&distances)?;
        let qa = metric_audit_with(&q.d, separation_tol, triangle_tol);
        Some((q, qa))
    } else {
        None
    };
    let uniform = match &quotient {
        Some((q, _)) => uniformity_check(&q.d),
        None => uniformity_check(&distances.d),
    };
    let uniform_predicted = ring && ring_uniformity_predicate(n);
    let curvature = match uniform {
        Some(c) => {
            let p = if n % 2 == 0 { n / 2 } else { n };
            if is_prime(p) && p >= 3 {
                Some(embedding_curvature(c, p)?)
            } else {
                None
            }
        }
        None => None,
    };
    let target = 2.0 * (std::f64::consts::FRAC_PI_2).ln();
    let mut asymptotic_gap = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            if i != j && distances.d[(i, j)].is_finite() {
                asymptotic_gap = asymptotic_gap.max((distances.d[(i, j)] - target).abs());
            }
        }
    }
    Ok(GeometryReport {
        distances,
        audit,
        quotient,
        uniform,
        uniform_predicted,
        curvature,
        asymptotic_gap,
    })
}
