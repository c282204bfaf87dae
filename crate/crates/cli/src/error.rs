use std::path::Path;

use gbh_core::GbhError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad configuration or input data. Exit code 2.
    #[error("{0}")]
    Validation(String),
    /// Unreadable or unwritable file. Exit code 3.
    #[error("{0}")]
    Io(String),
    /// Procedure or variant does not fit the data layout. Exit code 4.
    #[error("{0}")]
    Incompatible(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Io(_) => 3,
            CliError::Incompatible(_) => 4,
        }
    }

    pub(crate) fn io(path: &Path, err: impl std::fmt::Display) -> Self {
        CliError::Io(format!("{}: {err}", path.display()))
    }

    pub(crate) fn csv(path: &Path, err: csv::Error) -> Self {
        if err.is_io_error() {
            CliError::io(path, err)
        } else {
            CliError::Validation(format!("{}: {err}", path.display()))
        }
    }
}

impl From<GbhError> for CliError {
    fn from(err: GbhError) -> Self {
        match err {
            GbhError::VariantMismatch { .. } | GbhError::UnequalCells => {
                CliError::Incompatible(err.to_string())
            }
            other => CliError::Validation(other.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
