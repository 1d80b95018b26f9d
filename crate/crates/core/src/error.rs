use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("non-finite input: {0}")]
    NonFinite(&'static str),

    #[error("scale count J = {requested} exceeds the grid; largest admissible J is {max}")]
    ScaleTooLarge { requested: u32, max: u32 },

    #[error("grid mismatch: expected side {expected}, got {found}")]
    GridMismatch { expected: usize, found: usize },

    #[error("coefficient set does not belong to this frame: {0}")]
    KeyMismatch(String),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("bad image container: {0}")]
    BadContainer(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
