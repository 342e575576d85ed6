//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("closure cap of {cap} elements exceeded")]
    CapExceeded { cap: usize },
    #[error("work budget of {budget} term-operations exceeded")]
    WorkBudgetExceeded { budget: u64 },
    #[error("Molien series has non-integral coefficient at degree {degree}")]
    NonIntegralCoefficient { degree: usize },
    #[error("value is not exactly representable: {0}")]
    NotRepresentable(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown id: {0}")]
    UnknownId(String),
    #[error("observables do not commute")]
    NonCommutingTriple,
    #[error("state is not normalized (norm deviates by {0})")]
    NotNormalized(f64),
    #[error("partition longer than variable count")]
    PartitionTooLong,
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
