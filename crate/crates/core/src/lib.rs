//! Finite-dimensional quantum channels: representations, degradability
//! certificates, coherent and private information optimization, and the
//! flagged-mixture and Platypus experiments.

pub mod analysis;
pub mod channels;
pub mod info;
pub mod numkernel;
pub mod random;
pub mod zoo;

pub use channels::{Channel, Isometry, SuperOperator};
pub use info::{DensityMatrix, Ensemble};
pub use numkernel::{CMatrix, HermEig, C64};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("expected a square matrix, got {0}x{1}")]
    NotSquare(usize, usize),
    #[error("matrix is not positive semidefinite (min eigenvalue {0:.3e})")]
    NotPsd(f64),
    #[error("not an isometry: ||V^dag V - I|| = {0:.3e}")]
    NotIsometry(f64),
    #[error("map is not trace preserving: deviation {0:.3e}")]
    NotTracePreserving(f64),
    #[error("not a density matrix: {0}")]
    NotState(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
