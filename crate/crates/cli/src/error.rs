use std::path::PathBuf;

use polytrope_sound::Error as CoreError;
use thiserror::Error;

/// Process exit codes. These are a stable contract for scripts.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const IO: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const CONVERGENCE: i32 = 3;
    pub const INSTABILITY: i32 = 4;
}

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Compute(#[from] CoreError),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: {source}", path.display())]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => exit::USAGE,
            CliError::Io { .. } => exit::IO,
            CliError::Csv { source, .. } => match source.kind() {
                csv::ErrorKind::Io(_) => exit::IO,
                _ => exit::USAGE,
            },
            CliError::Compute(e) => match e.root_cause() {
                CoreError::ConvergenceFailure { .. } => exit::CONVERGENCE,
                CoreError::Instability { .. } | CoreError::DensityFloorViolation { .. } => {
                    exit::INSTABILITY
                }
                _ => exit::USAGE,
            },
        }
    }
}
