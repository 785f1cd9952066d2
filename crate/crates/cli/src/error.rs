use std::path::PathBuf;

use aaa_mor_core::Error as CoreError;

/// Failure categories of the command-line tool, each with its own exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("solver failure: {0}")]
    Solver(CoreError),

    #[error("unstable input: balanced truncation needs an asymptotically stable model")]
    Unstable,

    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Parse(_) => 3,
            CliError::Dimension(_) => 4,
            CliError::Solver(_) => 5,
            CliError::Unstable => 6,
            CliError::Io { .. } => 7,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::UnstableInput => CliError::Unstable,
            CoreError::DimensionMismatch { .. } => CliError::Dimension(e.to_string()),
            CoreError::NonFinite(_) => CliError::Parse(e.to_string()),
            other => CliError::Solver(other),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
