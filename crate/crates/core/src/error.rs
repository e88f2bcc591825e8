use thiserror::Error;

use crate::linalg::DensityViolation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {rows}x{cols}")]
    Dimension {
        expected: &'static str,
        rows: usize,
        cols: usize,
    },

    #[error("invalid Bloch vector: norm {norm} exceeds 1")]
    InvalidBloch { norm: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensity(DensityViolation),

    #[error("mixing weight p = {0} outside [0, 1]")]
    InvalidWeight(f64),

    #[error("decoherence function is negative: Γ({t}) = {value}")]
    NegativeDecoherence { t: f64, value: f64 },

    #[error("invalid decoherence function: {0}")]
    InvalidDecoherence(String),

    #[error("time {0} is outside the domain of the decoherence table")]
    OutOfTableRange(f64),

    #[error("negative time {0}")]
    NegativeTime(f64),

    #[error("non-finite value: {0}")]
    NonFinite(&'static str),

    #[error("oracle resolution {0} is below the minimum of 8")]
    InvalidResolution(usize),

    #[error("initial coherence x0 = {0} outside [-1, 1]")]
    InvalidCoherence(f64),
}
