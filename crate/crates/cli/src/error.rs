use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("{0}")]
    Core(#[from] pmeanfair_core::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("{0} check(s) failed")]
    ChecksFailed(usize),
}

impl CliError {
    pub fn malformed(msg: impl Into<String>) -> Self {
        CliError::Malformed(msg.into())
    }

    /// 2 malformed input, 3 infeasible, 4 enumeration budget, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        use pmeanfair_core::Error as E;
        match self {
            CliError::Io { .. } | CliError::Malformed(_) | CliError::Csv(_) => 2,
            CliError::Core(E::InvalidInput(_)) => 2,
            CliError::Core(E::Infeasible { .. }) => 3,
            CliError::Core(E::BudgetExceeded { .. }) => 4,
            CliError::Core(E::Diverged { .. }) | CliError::ChecksFailed(_) => 1,
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Malformed(e.to_string())
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;

pub fn read(path: &std::path::Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write(path: &std::path::Path, contents: &[u8]) -> Result<()> {
    std::fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}
