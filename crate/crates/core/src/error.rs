use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A configuration value is out of range or inconsistent.
    #[error("invalid configuration `{field}`: {reason}")]
    Config { field: String, reason: String },

    /// Declared feature/class metadata is unusable.
    #[error("schema error: {0}")]
    Schema(String),

    /// A data row could not be parsed. `line` is 1-based.
    #[error("line {line}: {reason}")]
    Row { line: usize, reason: String },

    /// Tabular data (e.g. an accuracy matrix) is incomplete or malformed.
    #[error("data error: {0}")]
    Data(String),

    /// A numeric argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A caller broke an API precondition (e.g. training on an unlabeled instance).
    #[error("contract violation: {0}")]
    Contract(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn row(line: usize, reason: impl Into<String>) -> Self {
        Error::Row {
            line,
            reason: reason.into(),
        }
    }
}
