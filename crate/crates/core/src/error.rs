use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("invalid configuration field `{field}`: {reason}")]
    Config { field: String, reason: String },

    #[error("degenerate energies at indices {k} and {k_prime}")]
    Degenerate { k: i64, k_prime: i64 },

    #[error("only {found} roots found below x_max = {x_max}, {requested} requested")]
    InsufficientRange {
        requested: usize,
        found: usize,
        x_max: f64,
    },

    #[error("eigensolver did not converge after {iterations} iterations (worst off-diagonal {worst:e})")]
    NoConvergence { iterations: usize, worst: f64 },

    #[error("no root with index {0} in table")]
    MissingRoot(usize),

    #[error("no eigenvalue within {tolerance} of {target}; nearest: {nearest:?}")]
    Selection {
        target: f64,
        tolerance: f64,
        nearest: Vec<f64>,
    },

    #[error("cache file {path}: {reason}")]
    Cache { path: PathBuf, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn config(field: &str, reason: impl Into<String>) -> Self {
        Error::Config {
            field: field.to_owned(),
            reason: reason.into(),
        }
    }

    /// True for errors that originate in user-supplied configuration rather
    /// than in the numerics.
    pub fn is_config(&self) -> bool {
        matches!(self, Error::Config { .. } | Error::Selection { .. })
    }
}
