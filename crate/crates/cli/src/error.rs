use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, HarnessError>;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid --{field}: {reason}")]
    InvalidField { field: &'static str, reason: String },

    #[error("cannot write --out {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("malformed report {path}: {source}")]
    Parse {
        path: PathBuf,
        source: serde_json::Error,
    },

    #[error("reports come from different configs (fields differ: {0})")]
    ConfigMismatch(String),

    #[error("cannot start worker pool: {0}")]
    Pool(String),

    #[error(transparent)]
    Estimator(#[from] symsens::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl HarnessError {
    pub(crate) fn field(field: &'static str, reason: impl Into<String>) -> Self {
        HarnessError::InvalidField {
            field,
            reason: reason.into(),
        }
    }
}
