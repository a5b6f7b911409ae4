use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = ExperimentError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Core(#[from] fixpointrl_core::Error),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },

    #[error("{}: {msg}", path.display())]
    Data { path: PathBuf, msg: String },

    #[error("no data: {0}")]
    NoData(String),

    #[error("{failed} of {total} realizations failed")]
    TooManyFailures { failed: usize, total: usize },
}

impl ExperimentError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io { path: path.into(), source }
    }

    pub(crate) fn data(path: impl Into<PathBuf>, msg: impl Into<String>) -> Self {
        Self::Data { path: path.into(), msg: msg.into() }
    }
}
