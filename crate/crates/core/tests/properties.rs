//! Property-based checks over randomized networks and number-theoretic
//! inputs. These complement the acceptance gate with invariants that must
//! hold for *every* input, not just the worked examples.

mod common;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use spin_itf::diophantine::{
    cf::continued_fraction, lll::lll_reduce, solution_from_q, Parity,
};
use spin_itf::fixed::Fx;
use spin_itf::geometry::{distance_matrix, metric_audit};
use spin_itf::itf::{analyze_pair, pmax_matrix, scan_max_probability, transfer_probability};
use spin_itf::network::SpinNetwork;
use spin_itf::spectra::eigensystem;

fn seeded_network(seed: u64) -> SpinNetwork {
    common::random_network(&mut ChaCha8Rng::seed_from_u64(seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn transfer_probability_is_symmetric_in_the_sites(
        seed in 0u64..1 << 20,
        t in 0.0f64..60.0,
    ) {
        let net = seeded_network(seed);
        let es = eigensystem(&net).unwrap();
        let n = net.n();
        for i in 1..=n {
            for j in i + 1..=n {
                let forward = transfer_probability(&es, i, j, t).unwrap();
                let backward = transfer_probability(&es, j, i, t).unwrap();
                prop_assert!((forward - backward).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn bound_matrix_is_a_symmetric_subunit_matrix(seed in 0u64..1 << 20) {
        let net = seeded_network(seed);
        let p = pmax_matrix(&eigensystem(&net).unwrap(), None).unwrap();
        let n = net.n();
        for i in 0..n {
            for j in 0..n {
                prop_assert!(p[(i, j)] >= 0.0);
                prop_assert!(p[(i, j)] <= 1.0 + 1e-9);
                prop_assert!((p[(i, j)] - p[(j, i)]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn scanned_maxima_respect_the_envelope(
        seed in 0u64..1 << 20,
        pair_pick in 0usize..64,
    ) {
        let net = seeded_network(seed);
        let es = eigensystem(&net).unwrap();
        let n = net.n();
        let i = 1 + pair_pick % n;
        let j = 1 + (pair_pick / n) % n;
        let bound = analyze_pair(&es, i, j, None).unwrap().p_max;
        let best = scan_max_probability(&es, i, j, 40.0, 0.05).unwrap();
        prop_assert!(best.p <= bound + 1e-9);
    }

    #[test]
    fn continued_fractions_reconstruct_rationals_exactly(
        num in 1u64..200_000,
        den in 1u64..200_000,
    ) {
        // quantizing num/den to fixed point perturbs it by < 2^-192, which
        // only disturbs partial quotients past the trust floor; the emitted
        // prefix must still fold back to exactly num/den
        let x = Fx::from_ratio(num as i64, den as i64);
        let cf = continued_fraction(&x, 400);
        // fold the terms back from the tail: t_0 + 1/(t_1 + 1/(...))
        let mut p = cf.terms.last().unwrap().clone();
        let mut q = BigInt::from(1u32);
        for term in cf.terms.iter().rev().skip(1) {
            let next_p = term * &p + &q;
            q = p;
            p = next_p;
        }
        let g = BigInt::from(num).gcd(&BigInt::from(den));
        prop_assert_eq!(p, BigInt::from(num) / &g);
        prop_assert_eq!(q, BigInt::from(den) / &g);
    }

    #[test]
    fn lll_transform_stays_unimodular(
        seed in 0u64..1 << 20,
        dim in 3usize..=5,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let basis: Vec<Vec<BigInt>> = (0..dim)
            .map(|_| {
                (0..dim)
                    .map(|_| BigInt::from(rand::Rng::gen_range(&mut rng, -40..=40i64)))
                    .collect()
            })
            .collect();
        prop_assume!(common::det_exact(&basis) != BigInt::zero());
        let red = lll_reduce(&basis, 3, 4).unwrap();
        prop_assert_eq!(common::det_exact(&red.coeffs).abs(), BigInt::from(1u32));
        for (vec, coeff) in red.basis.iter().zip(&red.coeffs) {
            for col in 0..dim {
                let combo: BigInt = (0..dim).map(|i| &coeff[i] * &basis[i][col]).sum();
                prop_assert_eq!(&combo, &vec[col]);
            }
        }
    }

    #[test]
    fn rounding_solutions_stay_within_half(
        a in 0.05f64..5.0,
        b in 0.05f64..5.0,
        q in 1u32..50_000,
    ) {
        let theta = [Fx::from_f64(a).unwrap(), Fx::from_f64(b).unwrap()];
        let parity = [Parity::Any, Parity::Any];
        let sol = solution_from_q(&theta, &parity, BigInt::from(q), 0.0, &[1.0, 1.0]);
        prop_assert!(sol.max_error <= 0.5 + 1e-12);
        prop_assert!(sol.parity_ok.iter().all(|&ok| ok));
    }

    #[test]
    fn distances_from_real_networks_pass_the_soft_axioms(seed in 0u64..1 << 20) {
        let net = seeded_network(seed);
        let p = pmax_matrix(&eigensystem(&net).unwrap(), None).unwrap();
        let audit = metric_audit(&distance_matrix(&p).unwrap().d);
        prop_assert!(audit.nonneg);
        prop_assert!(audit.identity);
        prop_assert!(audit.symmetry);
    }

    #[test]
    fn network_json_round_trips(seed in 0u64..1 << 20) {
        let net = seeded_network(seed);
        let back = SpinNetwork::from_json_str(&net.to_json_string()).unwrap();
        prop_assert_eq!(net.n(), back.n());
        prop_assert_eq!(net.kind(), back.kind());
        let (h, h_back) = (net.hamiltonian(), back.hamiltonian());
        for i in 0..net.n() {
            for j in 0..net.n() {
                prop_assert!((h.matrix[(i, j)] - h_back.matrix[(i, j)]).abs() < 1e-15);
            }
        }
    }
}
