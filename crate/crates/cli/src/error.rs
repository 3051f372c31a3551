//! CLI error type with the documented exit-code contract:
//! 0 success, 1 verification failure, 2 usage/config error, 3 numerical
//! failure.

use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),

    #[error("config parse error{}: {message}", .line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    Config {
        line: Option<usize>,
        message: String,
    },

    #[error("family file not found: {0}")]
    MissingFamily(PathBuf),

    #[error("malformed family file {path}: {message}")]
    MalformedFamily { path: PathBuf, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Math(#[from] poncelet_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_)
            | CliError::Config { .. }
            | CliError::MissingFamily(_)
            | CliError::MalformedFamily { .. }
            | CliError::Io { .. } => 2,
            CliError::Math(_) => 3,
        }
    }
}
