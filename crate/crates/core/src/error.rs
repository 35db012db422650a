use std::path::PathBuf;

use thiserror::Error;

/// Errors raised across the benchmark pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension {0}: at least 2 coordinates are required")]
    InvalidDimension(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("evaluation budget exhausted")]
    BudgetExhausted,

    #[error("objective returned a non-finite value at evaluation {evaluation}")]
    NonFiniteObjective { evaluation: u64 },

    #[error("no Nemenyi critical value tabulated for k = {0} (supported: 2..=20)")]
    UnsupportedK(usize),

    #[error("not found: {0}")]
    NotFound(String),

    #[error("I/O error at {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("JSON error at {path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("CSV error at {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Process exit status for the command-line tool: 3 for file and
    /// serialization failures, 2 for invalid configuration or arguments,
    /// 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. } | Error::Json { .. } | Error::Csv { .. } => 3,
            Error::BudgetExhausted | Error::NonFiniteObjective { .. } => 1,
            _ => 2,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::InvalidConfig(msg.into())
    }
}
