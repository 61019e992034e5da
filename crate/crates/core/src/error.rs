//! Crate-wide error type.
//!
//! Domain errors carry enough context to be reported by the CLI without a
//! backtrace. A few variants keep partial results (best-so-far solutions)
//! because the callers can often still use them.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid network: {0}")]
    InvalidNetwork(String),

    #[error("node index {index} out of range 1..={n}")]
    NodeOutOfRange { index: usize, n: usize },

    #[error("matrix is not symmetric: |a[{i}][{j}] - a[{j}][{i}]| = {dev}")]
    NotSymmetric { i: usize, j: usize, dev: f64 },

    #[error("eigensolver did not converge within {max_sweeps} sweeps (off-diagonal norm {off_norm})")]
    EigenConvergence { max_sweeps: usize, off_norm: f64 },

    #[error("fewer than 3 live eigenspaces ({live}); attainability analysis is degenerate")]
    DegenerateLive { live: usize },

    #[error("lattice basis is rank-deficient")]
    RankDeficient,

    #[error("scale parameter too large: extracted denominator is zero (s = {s})")]
    DegenerateScale { s: f64 },

    #[error("scale parameter {s} quantizes to zero at {bits} fractional bits")]
    ScaleUnderflow { s: f64, bits: u32 },

    #[error("enumeration budget exceeded for dimension {dim}; fell back to the first reduced vector")]
    EnumerationBudget { dim: usize },

    #[error("parity scaling did not converge within {rounds} rounds")]
    ParityNonConvergence { rounds: usize },

    #[error("no parity-feasible solution found; best candidate: {best}")]
    NoParityFeasible { best: String },

    #[error("solution violates the parity constraints; refusing to derive a transfer time")]
    ParityViolation,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported case: {0}")]
    Unsupported(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
