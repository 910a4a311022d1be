//! File formats, parallel execution, random workloads, benchmarks and the
//! commands behind the `intrecover` binary.

pub mod bench;
pub mod commands;
pub mod pgm;
pub mod random;
pub mod report;
pub mod runner;
pub mod spectrum;
pub mod table;

use std::path::{Path, PathBuf};

use intrecover_core::Error;

/// Errors surfaced by the commands; each maps to a stable exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid image: {0}")]
    InvalidImage(String),
    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),
    #[error("reconstruction failed: {0}")]
    Reconstruction(String),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    /// Domain errors are argument errors; anything else is a computation failure.
    pub fn from_core(e: Error) -> Self {
        match e {
            Error::Domain(m) => CliError::Usage(m),
            other => CliError::Reconstruction(other.to_string()),
        }
    }

    /// `2` bad arguments, `3` unreadable or invalid input, `4` reconstruction failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io { .. } | CliError::InvalidImage(_) | CliError::InvalidSpectrum(_) => 3,
            CliError::Reconstruction(_) => 4,
        }
    }
}
