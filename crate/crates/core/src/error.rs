use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not positive definite: {0}")]
    NotPositiveDefinite(String),

    #[error("argument outside the domain: {0}")]
    DomainError(String),

    #[error("invalid data: {0}")]
    InvalidData(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("no samples survive: {0}")]
    EmptyResult(String),

    #[error("parse error at row {row}, column {column}: {message}")]
    ParseError {
        row: usize,
        column: usize,
        message: String,
    },

    #[error("ragged rows: row {row} has {found} columns, expected {expected}")]
    RaggedRows {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("non-finite value at row {row}, column {column}")]
    NonFiniteValue { row: usize, column: usize },

    #[error("channel {channel} is constant (zero variance)")]
    ConstantChannel { channel: usize },

    #[error("schema mismatch in {path}: {message}")]
    SchemaMismatch { path: PathBuf, message: String },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code for the command-line front end.
    ///
    /// 2 for configuration/validation problems, 3 for data problems, 4 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::DomainError(_) => 2,
            Error::Io { .. } => 4,
            Error::NotPositiveDefinite(_)
            | Error::InvalidData(_)
            | Error::EmptyResult(_)
            | Error::ParseError { .. }
            | Error::RaggedRows { .. }
            | Error::NonFiniteValue { .. }
            | Error::ConstantChannel { .. }
            | Error::SchemaMismatch { .. } => 3,
        }
    }
}
