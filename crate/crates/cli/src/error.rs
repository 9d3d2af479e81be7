use std::path::PathBuf;

use duality_core::DualityError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{path}: {message}")]
    Config { path: PathBuf, message: String },

    #[error("{location}: {source}")]
    Validation {
        location: String,
        #[source]
        source: DualityError,
    },

    #[error("numerical failure: {0}")]
    Numerical(#[source] DualityError),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    /// Process exit code: 1 usage/config, 2 validation, 3 numerical.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config { .. } | CliError::Io { .. } => 1,
            CliError::Validation { .. } => 2,
            CliError::Numerical(_) => 3,
        }
    }

    /// Wraps a library error raised by a computation (not by config loading).
    pub fn from_compute(err: DualityError) -> Self {
        if err.is_numerical() {
            CliError::Numerical(err)
        } else {
            CliError::Validation {
                location: "input".into(),
                source: err,
            }
        }
    }
}
