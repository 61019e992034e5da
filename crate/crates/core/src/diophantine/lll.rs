//! Exact-integer LLL reduction with transformation tracking.
//!
//! The implementation keeps the Gram-Schmidt data in the integral form
//! `d_i = det(Gram_i)` and `lambda_{i,j} = d_{j+1} mu_{i,j}`, so every
//! quantity stays a plain integer and no precision is lost regardless of how
//! large the basis entries get. Size reduction and the Lovasz swap test are
//! the textbook integral recurrences; the swap condition with parameter
//! `delta = num/den` reads
//!
//! ```text
//! den * (d_{k-1} d_{k+1} + lambda_{k,k-1}^2) < num * d_k^2 .
//! ```
//!
//! Alongside the basis we carry the unimodular coefficient matrix U with the
//! invariant `reduced[j] = sum_i U[j][i] * original[i]`, which is what lets a
//! caller read integer solutions straight off a reduced vector.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// Dot product of two integer vectors.
fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Nearest integer to `num / den` for `den > 0`, ties toward +infinity on
/// nonnegative `num` and -infinity otherwise (matches floor((2n+d)/2d)).
fn nearest(num: &BigInt, den: &BigInt) -> BigInt {
    let den2 = den << 1u8;
    if num.is_negative() {
        -((((-num) << 1u8) + den) / den2)
    } else {
        ((num << 1u8) + den) / den2
    }
}

/// Result of a reduction: the reduced basis and the coefficient matrix.
#[derive(Clone, Debug)]
pub struct Reduction {
    /// Reduced basis vectors (each a coordinate vector).
    pub basis: Vec<Vec<BigInt>>,
    /// `basis[j] = sum_i coeffs[j][i] * input[i]`.
    pub coeffs: Vec<Vec<BigInt>>,
}

/// LLL-reduces `basis` (a list of linearly independent integer vectors) with
/// parameter `delta = delta_num / delta_den`, default 3/4.
pub fn lll_reduce(basis: &[Vec<BigInt>], delta_num: u64, delta_den: u64) -> Result<Reduction> {
    let n = basis.len();
    assert!(n > 0, "empty basis");
    assert!(delta_den > 0 && delta_num > delta_den / 4 && delta_num <= delta_den);
    let mut b: Vec<Vec<BigInt>> = basis.to_vec();
    let mut u: Vec<Vec<BigInt>> = (0..n)
        .map(|j| (0..n).map(|i| BigInt::from((i == j) as u8)).collect())
        .collect();

    // integral Gram-Schmidt: d[0] = 1, d[i+1] = det of leading i+1 Gram block
    let mut d: Vec<BigInt> = vec![BigInt::zero(); n + 1];
    d[0] = BigInt::from(1);
    let mut lam: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for j in 0..=i {
            let mut v = dot(&b[i], &b[j]);
            for k in 0..j {
                v = (&d[k + 1] * &v - &lam[i][k] * &lam[j][k]) / &d[k];
            }
            if j < i {
                lam[i][j] = v;
            } else {
                d[i + 1] = v;
            }
        }
        if !d[i + 1].is_positive() {
            return Err(Error::RankDeficient);
        }
    }

    let delta_num = BigInt::from(delta_num);
    let delta_den = BigInt::from(delta_den);

    // size-reduce b[k] against b[l]
    macro_rules! reduce {
        ($k:expr, $l:expr) => {{
            let (k, l) = ($k, $l);
            if (lam[k][l].abs() << 1u8) > d[l + 1] {
                let r = nearest(&lam[k][l], &d[l + 1]);
                for t in 0..n {
                    let s = &r * &b[l][t];
                    b[k][t] -= s;
                    let s = &r * &u[l][t];
                    u[k][t] -= s;
                }
                for j in 0..l {
                    let s = &r * &lam[l][j];
                    lam[k][j] -= s;
                }
                let s = &r * &d[l + 1];
                lam[k][l] -= s;
            }
        }};
    }

    let mut k = 1usize;
    while k < n {
        reduce!(k, k - 1);
        let lhs = &delta_den * (&d[k - 1] * &d[k + 1] + &lam[k][k - 1] * &lam[k][k - 1]);
        let rhs = &delta_num * &d[k] * &d[k];
        if lhs < rhs {
            b.swap(k, k - 1);
            u.swap(k, k - 1);
            for j in 0..k.saturating_sub(1) {
                let tmp = lam[k][j].clone();
                lam[k][j] = lam[k - 1][j].clone();
                lam[k - 1][j] = tmp;
            }
            for i in k + 1..n {
                let t = &lam[i][k - 1] * &d[k + 1] - &lam[i][k] * &lam[k][k - 1];
                lam[i][k - 1] =
                    (&lam[i][k - 1] * &lam[k][k - 1] + &lam[i][k] * &d[k - 1]) / &d[k];
                lam[i][k] = t / &d[k];
            }
            d[k] = (&d[k - 1] * &d[k + 1] + &lam[k][k - 1] * &lam[k][k - 1]) / &d[k];
            k = k.max(2) - 1;
        } else {
            for l in (0..k.saturating_sub(1)).rev() {
                reduce!(k, l);
            }
            k += 1;
        }
    }
    Ok(Reduction { basis: b, coeffs: u })
}

/// Squared Euclidean norm.
pub fn norm_sq(v: &[BigInt]) -> BigInt {
    dot(v, v)
}

/// Enumeration radius that suffices to reach the shortest vector from an
/// LLL-reduced basis in low dimension: `floor((2/sqrt 3)^n)`, at least 1.
pub fn enumeration_radius(dim: usize) -> i64 {
    let r = (2.0f64 / 3.0f64.sqrt()).powi(dim as i32).floor() as i64;
    r.max(1)
}

/// Shortest nonzero vector by enumeration over an LLL-reduced basis.
///
/// Returns the vector together with its coefficients in the ORIGINAL basis.
/// Dimensions above 6 are refused: the search space grows as `(2r+1)^n`.
pub fn shortest_vector(red: &Reduction) -> Result<(Vec<BigInt>, Vec<BigInt>)> {
    let n = red.basis.len();
    if n > 6 {
        return Err(Error::EnumerationBudget { dim: n });
    }
    let rad = enumeration_radius(n);
    let dim = red.basis[0].len();
    let mut best: Option<(BigInt, Vec<BigInt>, Vec<BigInt>)> = None;
    let mut beta = vec![-rad; n];
    loop {
        if !beta.iter().all(|&c| c == 0) {
            let mut v = vec![BigInt::zero(); dim];
            let mut coef = vec![BigInt::zero(); n];
            for (j, &c) in beta.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                let cb = BigInt::from(c);
                for t in 0..dim {
                    v[t] += &cb * &red.basis[j][t];
                }
                for t in 0..n {
                    coef[t] += &cb * &red.coeffs[j][t];
                }
            }
            let ns = norm_sq(&v);
            if best.as_ref().map_or(true, |(bn, _, _)| ns < *bn) {
                best = Some((ns, v, coef));
            }
        }
        // odometer over [-rad, rad]^n
        let mut pos = 0;
        loop {
            if pos == n {
                let (_, v, coef) = best.expect("nonempty enumeration");
                return Ok((v, coef));
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

#[cfg(test)]
mod tests {
    use super::*;

    fn biggify(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    fn apply_coeffs(original: &[Vec<BigInt>], coeffs: &[BigInt]) -> Vec<BigInt> {
        let dim = original[0].len();
        let mut v = vec![BigInt::zero(); dim];
        for (c, base) in coeffs.iter().zip(original) {
            for t in 0..dim {
                v[t] += c * &base[t];
            }
        }
        v
    }

    #[test]
    fn transform_reconstructs_reduced_basis() {
        let basis = biggify(&[vec![1, 1, 1], vec![-1, 0, 2], vec![3, 5, 6]]);
        let red = lll_reduce(&basis, 3, 4).unwrap();
        for j in 0..3 {
            assert_eq!(apply_coeffs(&basis, &red.coeffs[j]), red.basis[j]);
        }
    }

    #[test]
    fn coefficient_matrix_is_unimodular() {
        let basis = biggify(&[vec![12, 2], vec![13, 4]]);
        let red = lll_reduce(&basis, 3, 4).unwrap();
        let u = &red.coeffs;
        let det = &u[0][0] * &u[1][1] - &u[0][1] * &u[1][0];
        assert_eq!(det.abs(), BigInt::from(1));
    }

    #[test]
    fn classic_example_reduces_fully() {
        // basis of Z^2 in disguise
        let basis = biggify(&[vec![1, 1], vec![1, 2]]);
        let red = lll_reduce(&basis, 3, 4).unwrap();
        let n0 = norm_sq(&red.basis[0]);
        assert!(n0 <= BigInt::from(2));
    }

    #[test]
    fn rank_deficiency_is_detected() {
        let basis = biggify(&[vec![1, 2, 3], vec![2, 4, 6], vec![0, 0, 1]]);
        assert!(matches!(lll_reduce(&basis, 3, 4), Err(Error::RankDeficient)));
    }

    #[test]
    fn first_vector_is_near_shortest_on_random_lattices() {
        // deterministic xorshift so the test needs no rng dependency
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state % 81) as i64 - 40
        };
        let mut tested = 0;
        while tested < 60 {
            let rows: Vec<Vec<i64>> = (0..3).map(|_| (0..3).map(|_| next()).collect()).collect();
            let basis = biggify(&rows);
            let red = match lll_reduce(&basis, 3, 4) {
                Ok(r) => r,
                Err(_) => continue, // singular draw
            };
            tested += 1;
            let (sv, coef) = shortest_vector(&red).unwrap();
            assert_eq!(apply_coeffs(&basis, &coef), sv);
            let first = norm_sq(&red.basis[0]);
            let shortest = norm_sq(&sv);
            // guaranteed factor 2^(n-1) on the squared norms
            assert!(first <= BigInt::from(4) * &shortest, "{first} vs {shortest}");
        }
    }

    #[test]
    fn enumeration_radius_grows_slowly() {
        assert_eq!(enumeration_radius(2), 1);
        assert_eq!(enumeration_radius(3), 1);
        assert_eq!(enumeration_radius(4), 1);
        assert_eq!(enumeration_radius(5), 2);
        assert_eq!(enumeration_radius(6), 2);
    }
}
