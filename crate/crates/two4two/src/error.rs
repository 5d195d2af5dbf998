//! Crate-wide error type.
//!
//! Variants map onto the failure categories surfaced by the CLI: exit code 2
//! for configuration/usage problems, exit code 1 for pipeline failures.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Invalid configuration (bad bounds, malformed TOML, impossible request).
    #[error("configuration error: {0}")]
    Config(String),

    /// Invalid argument to an operation (empty input, zero vector, bad range).
    #[error("argument error: {0}")]
    Argument(String),

    /// Tensor/image dimension mismatch.
    #[error("shape error: {0}")]
    Shape(String),

    /// Non-finite values where finite ones are required.
    #[error("numeric error: {0}")]
    Numeric(String),

    /// Training diverged or failed.
    #[error("training error: {0}")]
    Training(String),

    /// Renderer could not converge within its march budget.
    #[error("render quality error: {0}")]
    RenderQuality(String),

    /// Explanation pool too small for the requested layout.
    #[error("insufficient pool: {0}")]
    InsufficientPool(String),

    /// No concept passed the selection threshold.
    #[error("empty explanation: {0}")]
    EmptyExplanation(String),

    /// Response file could not be ingested.
    #[error("ingestion error at row {row}: {message}")]
    Ingest { row: usize, message: String },

    /// Statistic undefined for the given input.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("checkpoint error: {0}")]
    Checkpoint(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("image error: {0}")]
    Image(String),

    #[error("serialization error: {0}")]
    Serde(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serde(e.to_string())
    }
}

impl From<image::ImageError> for Error {
    fn from(e: image::ImageError) -> Self {
        Error::Image(e.to_string())
    }
}

impl Error {
    /// CLI exit code for this error: 2 for usage/config, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Argument(_) => 2,
            _ => 1,
        }
    }
}
