use thiserror::Error;

/// Errors produced anywhere in the embedding and analysis pipeline.
#[derive(Debug, Error)]
pub enum StegoError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("message needs {needed} cover positions but only {available} are available")]
    Capacity { needed: usize, available: usize },

    #[error("embedding failed: {0}")]
    EmbeddingFailure(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("malformed data: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, StegoError>;

pub(crate) fn invalid(msg: impl Into<String>) -> StegoError {
    StegoError::InvalidParameter(msg.into())
}
