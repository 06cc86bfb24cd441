use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the optimizer, the problem models and the experiment harness.
#[derive(Debug, Error)]
pub enum QhdeError {
    /// A caller broke an operation's precondition (length mismatch, NaN fitness, ...).
    #[error("contract violation: {0}")]
    Contract(String),

    /// Parameters that cannot describe a valid run.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// Price data rejected during ingestion.
    #[error("price data rejected at row {row}, column {column}: {reason}")]
    Ingestion {
        row: usize,
        column: usize,
        reason: String,
    },

    /// The Sharpe ratio is undefined because the portfolio variance is not positive.
    #[error("Sharpe ratio undefined: portfolio variance {0} is not positive")]
    UndefinedRatio(f64),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl QhdeError {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        QhdeError::Contract(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        QhdeError::Config(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        QhdeError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, QhdeError>;
