use thiserror::Error;

/// Errors shared by the constructors and verifiers of this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is singular or numerically non-invertible: {0}")]
    Singular(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("schema violation at {pointer}: {message}")]
    Schema { pointer: String, message: String },

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("graph must be connected for {0}")]
    Disconnected(String),

    #[error("criterion unavailable: {0}")]
    CriterionUnavailable(String),

    #[error("no entry for KO dimension {ko} in the {signature} table")]
    UnknownKoDimension { signature: String, ko: u8 },
}

pub type Result<T> = std::result::Result<T, Error>;
