use thiserror::Error;

/// Errors raised by constructors and contract checks.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("not Hermitian (max |A - A^dag| = {0:e})")]
    NotHermitian(f64),

    #[error("trace is not 1 (got {0})")]
    InvalidTrace(f64),

    #[error("not positive semi-definite (min eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("non-finite matrix entry")]
    NonFinite,

    #[error("dimension must be prime (got {0})")]
    NonPrime(usize),

    #[error("parameter {name} = {value} outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: String,
    },

    #[error("invalid probability distribution: {0}")]
    Distribution(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("contract violated: {0}")]
    Contract(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn out_of_range(name: &'static str, value: f64, range: impl Into<String>) -> Error {
    Error::OutOfRange {
        name,
        value,
        range: range.into(),
    }
}
