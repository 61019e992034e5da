//! Information-transfer fidelity (ITF) bounds for single excitations in spin
//! networks, with exact attainability analysis and bias-field routing.
//!
//! The library works in the single-excitation subspace, where an XX or
//! Heisenberg network on `n` spins is an `n x n` real symmetric matrix. The
//! central quantity is the transfer-probability envelope
//!
//! ```text
//! p_max(i, j) = ( sum_k |<i| P_k |j>| )^2  >=  p_t(i, j)  for all t,
//! ```
//!
//! where `P_k` are the spectral projectors of the Hamiltonian. Everything
//! else follows from this bound:
//!
//! * [`spectra`] builds eigensystems, either analytically (uniform rings and
//!   chains have closed-form spectra) or numerically (cyclic Jacobi).
//! * [`itf`] computes overlaps, `p_max`, transfer probabilities and time
//!   scans.
//! * [`attainability`] turns the phase-alignment condition for reaching
//!   `p_max` into a parity-constrained simultaneous Diophantine
//!   approximation problem and decides rational (in)dependence of the
//!   transition frequencies.
//! * [`diophantine`] holds the exact-integer machinery: continued fractions,
//!   LLL lattice reduction with unimodular-transform tracking, a scaling
//!   trick that fixes numerator parities, and a GA search over lattice
//!   weights.
//! * [`timing`] converts Diophantine denominators into transfer times and
//!   error/feasibility bounds.
//! * [`geometry`] treats `d = -ln p_max` as a (pseudo-)metric and audits the
//!   axioms.
//! * [`routing`] plans strong local bias fields that asymptotically cut a
//!   ring into chains with perfect mirror transfer.
//!
//! Nodes are 1-based in the public API throughout, matching the usual
//! physics labelling of ring sites.

pub mod attainability;
pub mod cli;
pub mod error;
pub mod fixed;
pub mod geometry;
pub mod itf;
pub mod network;
pub mod routing;
pub mod spectra;
pub mod timing;

pub mod diophantine;

pub use error::{Error, Result};
pub use network::{CouplingKind, SpinNetwork, StructureTag, Topology};
pub use spectra::EigenSystem;
