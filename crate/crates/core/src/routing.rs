//! Bias-field routing on rings.
//!
//! A strong local bias `zeta` on one ring node decouples it: as `zeta` grows
//! the remaining `n - 1` nodes behave as an open chain, whose mirror pairs
//! `(i, n - i)` enjoy unit transfer bounds. Routing between two ring nodes
//! therefore reduces to finding a bias node that makes them mirror images.
//! A single bias at `b` works exactly when `2b = s + t (mod n)`: always
//! solvable for odd `n`, solvable for even `n` when `s + t` is even, and
//! otherwise requiring two bias nodes, found here by exhaustive scan. The
//! mirror symmetry argument makes `p_max(s,t) = 1` exact at any finite bias;
//! finite-`zeta` evaluations are attached to quantify how fast the dynamics
//! approaches the asymptotic chain picture.

use crate::error::{Error, Result};
use crate::itf::pmax_matrix;
use crate::network::{CouplingKind, SpinNetwork};
use crate::spectra::eigensystem;
use nalgebra::DMatrix;

/// Default bias strength used when evaluating a plan.
pub const DEFAULT_PLAN_ZETA: f64 = 1e3;

/// Transfer-bound matrix of a ring with one biased node.
pub fn biased_ring_pmax(n: usize, bias_node: usize, zeta: f64) -> Result<DMatrix<f64>> {
    let net = SpinNetwork::ring(n, CouplingKind::Xx)?.with_bias(bias_node, zeta)?;
    pmax_matrix(&eigensystem(&net)?, None)
}

/// Transfer-bound matrix of a uniform open chain.
pub fn chain_pmax(n: usize) -> Result<DMatrix<f64>> {
    let net = SpinNetwork::chain(n, CouplingKind::Xx)?;
    pmax_matrix(&eigensystem(&net)?, None)
}

/// How a route plan achieves its mirror symmetry.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RouteMechanism {
    /// Source equals target; nothing to do.
    Identity,
    /// One bias node at the midpoint of an odd arc between the endpoints.
    OddArcMidpoint,
    /// Two bias nodes, needed on even rings when `s + t` is odd.
    EvenGapDoubleBias,
}

/// A bias assignment routing one pair on a ring.
#[derive(Clone, Debug)]
pub struct RoutePlan {
    pub n: usize,
    pub source: usize,
    pub target: usize,
    /// Nodes to bias, with strengths.
    pub bias_nodes: Vec<(usize, f64)>,
    /// Ring rotation mapping the (first) bias node to label `n`.
    pub relabeling_offset: usize,
    /// Asymptotic bound: 1 for mirror plans by symmetry.
    pub predicted_pmax: f64,
    /// `p_max(source, target)` evaluated at the plan's finite bias.
    pub evaluated_pmax: f64,
    pub mechanism: RouteMechanism,
}

/// Chooses bias node(s) making `target` the mirror image of `source`.
///
/// `zeta` is the bias strength used for both the returned assignment and its
/// evaluation; it defaults to `DEFAULT_PLAN_ZETA`.
pub fn plan_route(n: usize, source: usize, target: usize, zeta: Option<f64>) -> Result<RoutePlan> {
    if n < 4 {
        return Err(Error::InvalidArgument(format!("routing needs n >= 4, got {n}")));
    }
    for node in [source, target] {
        if node == 0 || node > n {
            return Err(Error::NodeOutOfRange { index: node, n });
        }
    }
    let zeta = zeta.unwrap_or(DEFAULT_PLAN_ZETA);
    if source == target {
        return Ok(RoutePlan {
            n,
            source,
            target,
            bias_nodes: Vec::new(),
            relabeling_offset: 0,
            predicted_pmax: 1.0,
            evaluated_pmax: 1.0,
            mechanism: RouteMechanism::Identity,
        });
    }
    if n % 2 == 1 || (source + target) % 2 == 0 {
        let b = single_bias_node(n, source, target);
        let evaluated = biased_ring_pmax(n, b, zeta)?[(source - 1, target - 1)];
        return Ok(RoutePlan {
            n,
            source,
            target,
            bias_nodes: vec![(b, zeta)],
            relabeling_offset: n - b,
            predicted_pmax: 1.0,
            evaluated_pmax: evaluated,
            mechanism: RouteMechanism::OddArcMidpoint,
        });
    }
    // even ring, odd label sum: no single mirror node exists; scan pairs
    let mut best: Option<((usize, usize), f64)> = None;
    for a in 1..=n {
        if a == source || a == target {
            continue;
        }
        for b in a + 1..=n {
            if b == source || b == target {
                continue;
            }
            let net = SpinNetwork::ring(n, CouplingKind::Xx)?
                .with_bias(a, zeta)?
                .with_bias(b, zeta)?;
            let p = pmax_matrix(&eigensystem(&net)?, None)?[(source - 1, target - 1)];
            let better = match best {
                None => true,
                Some((_, bp)) => p > bp,
            };
            if better {
                best = Some(((a, b), p));
            }
        }
    }
    let ((a, b), evaluated) =
        best.ok_or_else(|| Error::InvalidArgument("no bias pair available".into()))?;
    Ok(RoutePlan {
        n,
        source,
        target,
        bias_nodes: vec![(a, zeta), (b, zeta)],
        relabeling_offset: n - a,
        predicted_pmax: evaluated,
        evaluated_pmax: evaluated,
        mechanism: RouteMechanism::EvenGapDoubleBias,
    })
}

/// Solves `2b = s + t (mod n)` and picks the midpoint of the shorter arc.
///
/// For odd `n` the solution is unique. For even `n` (even `s + t`) both arc
/// midpoints work; the one on the shorter arc is chosen, by smaller label on
/// a tie. Neither can collide with an endpoint when `s != t`.
fn single_bias_node(n: usize, s: usize, t: usize) -> usize {
    let to_node = |x: usize| -> usize {
        let r = x % n;
        if r == 0 {
            n
        } else {
            r
        }
    };
    if n % 2 == 1 {
        return to_node((s + t) * ((n + 1) / 2) % n);
    }
    debug_assert!((s + t) % 2 == 0);
    let b1 = to_node((s + t) / 2);
    let b2 = to_node((s + t) / 2 + n / 2);
    // distance from the bias node to the nearer endpoint, around the ring
    let arc = |b: usize| -> usize {
        let d1 = (b + n - s) % n;
        let d2 = (b + n - t) % n;
        d1.min(n - d1).min(d2.min(n - d2))
    };
    match arc(b1).cmp(&arc(b2)) {
        std::cmp::Ordering::Less => b1,
        std::cmp::Ordering::Greater => b2,
        std::cmp::Ordering::Equal => b1.min(b2),
    }
}
