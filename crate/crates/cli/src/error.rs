use thiserror::Error;

use crate::literal::ParseError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid quaternion '{input}': {source}")]
    Literal {
        input: String,
        #[source]
        source: ParseError,
    },
    #[error("config: {0}")]
    Config(String),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {message}")]
    Input { path: String, message: String },
    #[error(transparent)]
    Core(#[from] qslice::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
