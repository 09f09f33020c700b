use thiserror::Error;

/// Everything that can go wrong while building models or computing measures.
#[derive(Debug, Error)]
pub enum Error {
    #[error("mass error: {0}")]
    Mass(String),
    #[error("geometry error: {0}")]
    Geometry(String),
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("support error: {0}")]
    Support(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("count error: {0}")]
    Count(String),
    #[error("state error: {0}")]
    State(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("unknown example `{0}`")]
    UnknownExample(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
