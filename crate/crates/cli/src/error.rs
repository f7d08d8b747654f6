use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// A flag (or the matching config key) has a bad or missing value.
    #[error("{flag}: {message}")]
    Usage { flag: String, message: String },

    #[error("config {path}: {message}")]
    Config { path: PathBuf, message: String },

    #[error(transparent)]
    Core(#[from] heston_fpt::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn usage(flag: &str, message: impl Into<String>) -> Self {
        CliError::Usage {
            flag: flag.to_string(),
            message: message.into(),
        }
    }

    /// 3 for numerical non-convergence, 2 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(heston_fpt::Error::NonConvergence { .. }) => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
