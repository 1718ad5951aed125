use std::path::PathBuf;

use gsa_core::GsaError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error{}: {message}", line.map(|l| format!(" on line {l}")).unwrap_or_default())]
    Config {
        line: Option<usize>,
        message: String,
    },

    #[error(transparent)]
    Compute(#[from] GsaError),

    #[error("cannot write {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        CliError::Config {
            line: None,
            message: message.into(),
        }
    }

    /// Process exit status: 2 for configuration problems, 3 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } => 2,
            CliError::Compute(_) | CliError::Io { .. } => 3,
        }
    }
}
