//! Shared oracles for the integration suites.
//!
//! Everything here is implemented independently of the library's own
//! numerics: probabilities come from nalgebra's symmetric eigensolver rather
//! than the crate's analytic/Jacobi paths, and determinants are computed by
//! exact fraction-free elimination.

// each test binary uses a different subset of the oracles
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use spin_itf::network::{CouplingKind, SpinNetwork};

/// `|<j| e^{-iHt} |i>|^2` via nalgebra's SymmetricEigen (1-based sites).
pub fn probability_oracle(h: &DMatrix<f64>, i: usize, j: usize, t: f64) -> f64 {
    let se = nalgebra::SymmetricEigen::new(h.clone());
    let (i, j) = (i - 1, j - 1);
    let mut re = 0.0;
    let mut im = 0.0;
    for k in 0..h.nrows() {
        let w = se.eigenvectors[(i, k)] * se.eigenvectors[(j, k)];
        let phase = se.eigenvalues[k] * t;
        re += w * phase.cos();
        im -= w * phase.sin();
    }
    re * re + im * im
}

/// Exact determinant by Bareiss fraction-free elimination.
pub fn det_exact(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    assert!(m.iter().all(|row| row.len() == n));
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign = 1i32;
    let mut prev = BigInt::from(1);
    for k in 0..n {
        if a[k][k].is_zero() {
            let swap = (k + 1..n).find(|&r| !a[r][k].is_zero());
            match swap {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    if sign < 0 {
        -a[n - 1][n - 1].clone()
    } else {
        a[n - 1][n - 1].clone()
    }
}

/// A random small network: ring, chain, or custom symmetric couplings.
pub fn random_network(rng: &mut ChaCha8Rng) -> SpinNetwork {
    let n = rng.gen_range(3..=10usize);
    let kind = if rng.gen_bool(0.5) { CouplingKind::Xx } else { CouplingKind::Heisenberg };
    match rng.gen_range(0..4u8) {
        0 => SpinNetwork::ring(n, kind).unwrap(),
        1 => SpinNetwork::chain(n, kind).unwrap(),
        2 => {
            let node = rng.gen_range(1..=n);
            let zeta = rng.gen_range(0.1..20.0);
            SpinNetwork::ring(n, kind).unwrap().with_bias(node, zeta).unwrap()
        }
        _ => {
            // random connected couplings: a path backbone plus random extras
            let mut c = DMatrix::<f64>::zeros(n, n);
            for i in 0..n - 1 {
                let w = rng.gen_range(0.2..2.0);
                c[(i, i + 1)] = w;
                c[(i + 1, i)] = w;
            }
            for i in 0..n {
                for j in i + 2..n {
                    if rng.gen_bool(0.3) {
                        let w = rng.gen_range(-1.5..1.5);
                        c[(i, j)] = w;
                        c[(j, i)] = w;
                    }
                }
            }
            SpinNetwork::custom(c, kind).unwrap()
        }
    }
}
