use std::path::Path;

use thiserror::Error;

use crate::config::ConfigError;
use crate::data::DataError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Config(#[from] ConfigError),

    #[error(transparent)]
    Data(#[from] DataError),

    #[error(transparent)]
    Model(#[from] refl_core::Error),

    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

impl CliError {
    pub fn io(path: &Path, err: impl std::fmt::Display) -> Self {
        Self::Io {
            path: path.display().to_string(),
            message: err.to_string(),
        }
    }

    /// 0 success, 1 I/O, 2 usage or configuration, 3 data parsing, 4 numerical failure.
    pub fn exit_code(&self) -> i32 {
        use refl_core::Error as E;
        match self {
            Self::Usage(_) | Self::Config(_) => 2,
            Self::Data(DataError::Read { .. }) | Self::Io { .. } => 1,
            Self::Data(_) => 3,
            Self::Model(
                E::NumericalOverflow { .. }
                | E::DegenerateInterface
                | E::UnusableSpace
                | E::InvalidStart(_)
                | E::InsufficientSamples { .. },
            ) => 4,
            Self::Model(_) => 2,
        }
    }
}
