//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied value violates a precondition (range, norm, dimension).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A protocol configuration is unusable (non-orthonormal measurement,
    /// non-unitary correction, malformed scenario).
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// An internal identity failed badly enough to signal a bug rather than
    /// a floating-point artifact.
    #[error("internal consistency failure: {0}")]
    InternalConsistency(String),

    /// The optimization objective carries no signal (noise parameter p = 0).
    #[error("objective is flat: average fidelity does not depend on the corrections at p = 0")]
    FlatObjective,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("scenario JSON: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::InvalidConfig(msg.into())
    }
}
