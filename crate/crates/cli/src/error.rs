use std::path::PathBuf;

use crate::config::ConfigError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),

    #[error(transparent)]
    Core(#[from] toda_lift::Error),

    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },

    #[error("{0}: {1}")]
    Csv(PathBuf, csv::Error),

    #[error("{0}: {1}")]
    Json(PathBuf, serde_json::Error),

    #[error("{0}: {1}")]
    Parse(PathBuf, String),
}

impl CliError {
    /// Configuration problems are usage errors; everything else is a failed run.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            _ => 1,
        }
    }
}
