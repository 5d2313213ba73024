use std::path::PathBuf;

use thiserror::Error;

/// Errors of the std-side layers: IO, formats, configuration and runners.
#[derive(Debug, Error)]
pub enum SqfnError {
    #[error(transparent)]
    Core(#[from] sqfn_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("malformed field file: {0}")]
    Format(String),
    #[error("{0}")]
    Usage(String),
}

impl SqfnError {
    pub(crate) fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> Self {
        let path = path.into();
        move |source| SqfnError::Io { path, source }
    }
}

pub type Result<T> = std::result::Result<T, SqfnError>;
