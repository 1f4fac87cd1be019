use std::path::PathBuf;
use thiserror::Error;

/// Failures of the command-line front end.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{file}:{line}: {message}")]
    Parse { file: String, line: usize, message: String },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("{0}: matrix has entries with nonzero imaginary part")]
    NonRealEntries(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] zgv_core::Error),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    /// 2 for bad input, 3 for numerical failure.
    pub fn exit_code(&self) -> i32 {
        use zgv_core::Error as E;
        match self {
            CliError::Core(
                E::InvalidConfig(_) | E::InvalidMaterial(_) | E::DimensionMismatch(_) | E::NonRealEntries(_) | E::NonFinite(_) | E::SingularMass { .. },
            ) => 2,
            CliError::Core(_) => 3,
            _ => 2,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
