use std::path::PathBuf;

use thiserror::Error;

/// Failures that map to a dedicated process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: row {row}: {message}")]
    Parse {
        path: PathBuf,
        row: u64,
        message: String,
    },

    #[error("{path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("inputs have {left} and {right} points; correspondence needs equal counts")]
    SizeMismatch { left: usize, right: usize },

    #[error("cannot write to {path}: {source}")]
    Unwritable {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } | CliError::Read { .. } => 2,
            CliError::SizeMismatch { .. } => 3,
            CliError::Unwritable { .. } => 4,
        }
    }
}

/// Exit code for an error chain: the first [`CliError`] found decides,
/// anything else is a generic failure.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    err.chain()
        .find_map(|e| e.downcast_ref::<CliError>())
        .map_or(1, CliError::exit_code)
}
