use std::path::PathBuf;

use thiserror::Error;

use crate::ingest::IngestError;

/// Exit status for IO failures.
pub const EXIT_IO: i32 = 1;
/// Exit status for invalid input, flags or configuration.
pub const EXIT_VALIDATION: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Ingest { path: PathBuf, source: IngestError },
    #[error(transparent)]
    Core(#[from] ftvol_core::Error),
    #[error("invalid configuration: {0}")]
    Config(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => EXIT_IO,
            CliError::Ingest {
                source: IngestError::Io(_),
                ..
            } => EXIT_IO,
            _ => EXIT_VALIDATION,
        }
    }
}
