use std::path::{Path, PathBuf};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0} already exists; pass --force to overwrite")]
    Exists(PathBuf),
    #[error("{failed} of {total} checks failed")]
    Verification { failed: usize, total: usize },
    /// A numerical routine could not reach its requested accuracy.
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        Self::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    /// 1 verification or accuracy failure, 2 usage error, 3 I/O error.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Verification { .. } | CliError::Numerical(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Io { .. } | CliError::Exists(_) => 3,
        }
    }
}

pub fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}
