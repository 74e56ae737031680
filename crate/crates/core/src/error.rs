use thiserror::Error;

pub type Result<T, E = MowspError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum MowspError {
    /// Caller supplied something outside an operation's domain.
    #[error("invalid input: {0}")]
    Input(String),

    /// An internal contract between components was broken.
    #[error("logic error: {0}")]
    Logic(String),

    /// Operation not valid in the current state (e.g. popping an empty heap).
    #[error("invalid state: {0}")]
    State(String),

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("generation failed: {0}")]
    Generation(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl MowspError {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        MowspError::Input(msg.into())
    }

    pub(crate) fn logic(msg: impl Into<String>) -> Self {
        MowspError::Logic(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        MowspError::Parse {
            line,
            message: msg.into(),
        }
    }
}
