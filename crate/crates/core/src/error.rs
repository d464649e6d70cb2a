use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("divisor is not monic: {0}")]
    NotMonic(String),
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("algebra is not split over the rationals: {0}")]
    NotSplit(String),
    #[error("matrix is not unimodular over K[λ, λ^-1]: {0}")]
    NotUnimodular(String),
    #[error("invalid metric: {0}")]
    InvalidMetric(String),
    #[error("metric is not invariant: {0}")]
    NotInvariant(String),
    #[error("element is not nilpotent: {0}")]
    NotNilpotent(String),
    #[error("grading or charge mismatch: {0}")]
    Grading(String),
    #[error("pole in λ: {0}")]
    LambdaPole(String),
    #[error("structure is not integrable: {0}")]
    NotIntegrable(String),
    #[error("invalid geometric model: {0}")]
    InvalidModel(String),
    #[error("invalid correlator data: {0}")]
    InvalidDataset(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
