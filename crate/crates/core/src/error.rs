use thiserror::Error;

/// Errors produced by the verification library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{value} is not invertible modulo {modulus}")]
    NotInvertible { value: u64, modulus: u64 },

    #[error("prime sampling budget exhausted")]
    Exhausted,

    #[error("secret prime {0} is also a public prime")]
    SharedFactor(u64),

    #[error("malformed signature")]
    MalformedSignature,

    #[error("malformed key material: {0}")]
    MalformedKey(&'static str),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("gave up after {0} resampling attempts")]
    ResampleLimit(u32),

    #[error("query budget exceeded; the verification key must be refreshed")]
    BudgetExceeded,

    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
