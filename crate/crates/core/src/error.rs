use thiserror::Error;

/// Errors produced by the codec, decoders and simulation harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("code dimension {dimension} exceeds the enumeration limit of {limit}")]
    Capacity { dimension: usize, limit: usize },

    #[error("internal state error: {0}")]
    InternalState(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
