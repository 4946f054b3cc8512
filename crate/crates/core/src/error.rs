use num_bigint::BigInt;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("inputs lie in distinct quadratic fields Q(sqrt(-{0})) and Q(sqrt(-{1}))")]
    DistinctFields(BigInt, BigInt),

    #[error("beta must be nonzero")]
    ZeroBeta,

    #[error("alpha must be nonzero here; the zero case is handled directly by the bound engine")]
    ZeroAlpha,

    #[error("parameter out of range: {0}")]
    Parameter(String),

    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),

    #[error("inconclusive: {0}")]
    Inconclusive(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),

    #[error("certificate rejected: {0}")]
    Certificate(String),

    #[error("no admissible parameters: {0}")]
    Infeasible(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
