use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {what}")]
    Parse { what: String },

    #[error("validation error: {what}")]
    Validation { what: String },

    #[error("{what}")]
    Unsupported { what: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
