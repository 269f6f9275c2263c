use std::path::PathBuf;

use qbound_core::instance::InstanceError;
use thiserror::Error;

use crate::config::Suite;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Instance {
        path: PathBuf,
        #[source]
        source: InstanceError,
    },

    #[error("invalid instance: {0}")]
    Invalid(#[from] qbound_core::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{suite} instance {instance}: {source}")]
    Numerical {
        suite: Suite,
        instance: usize,
        #[source]
        source: qbound_core::Error,
    },
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Instance { .. } | CliError::Invalid(_) => EXIT_USAGE,
            CliError::Io { .. } => EXIT_IO,
            CliError::Numerical { .. } => EXIT_CHECK_FAILURE,
        }
    }
}
