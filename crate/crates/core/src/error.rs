use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("enumeration over {needed} sign variables exceeds the cap of {cap}; use monte_carlo for an estimate")]
    EnumerationCapExceeded { needed: usize, cap: usize },

    #[error("support product of size {needed} exceeds the cap of {cap}; use monte_carlo for an estimate")]
    SupportProductCapExceeded { needed: u128, cap: u128 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("hypothesis violated on index set {set:?}: {reason}")]
    HypothesisViolated { set: Vec<usize>, reason: String },

    #[error("malformed input: {0}")]
    Parse(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}
