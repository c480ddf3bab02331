use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("point is not a zero of the form: {0}")]
    NotAZero(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("matrix is not positive semidefinite")]
    NotPsd,
    #[error("coefficients are not rational: {0}")]
    NotRational(String),
}

pub type Result<T> = std::result::Result<T, Error>;
