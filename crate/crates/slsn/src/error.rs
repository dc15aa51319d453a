use thiserror::Error;

#[derive(Debug, Error)]
pub enum SlsnError {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("instance is infeasible")]
    Infeasible,
    #[error("refused: {0}")]
    Budget(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("numeric overflow: {0}")]
    Overflow(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, SlsnError>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(SlsnError::Input(msg.into()))
}

pub(crate) fn contract<T>(msg: impl Into<String>) -> Result<T> {
    Err(SlsnError::Contract(msg.into()))
}
