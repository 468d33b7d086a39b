use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("unknown scenario '{0}'")]
    UnknownScenario(String),

    #[error("config names scenario '{config}' but the command is '{command}'")]
    ScenarioMismatch { config: String, command: String },

    #[error("missing required parameter '{0}'")]
    MissingParameter(String),

    #[error("invalid parameter '{key}': {reason}")]
    InvalidParameter { key: String, reason: String },

    #[error("cannot read config {path}: {source}")]
    ConfigRead { path: PathBuf, source: std::io::Error },

    #[error("cannot parse config {path}: {source}")]
    ConfigParse { path: PathBuf, source: toml::de::Error },

    #[error("cannot read input {path}: {reason}")]
    Input { path: PathBuf, reason: String },

    #[error("cannot write {path}: {source}")]
    Output { path: PathBuf, source: std::io::Error },

    #[error(transparent)]
    Numerical(#[from] cusplab::Error),

    #[error("serialization failed: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn invalid(key: &str, reason: impl Into<String>) -> Self {
        Self::InvalidParameter {
            key: key.into(),
            reason: reason.into(),
        }
    }

    /// 2 for configuration, input and I/O problems, 3 for numerical failures.
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Numerical(cusplab::Error::OutOfRange { .. } | cusplab::Error::NotUnivalent { .. }) => 2,
            Self::Numerical(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
