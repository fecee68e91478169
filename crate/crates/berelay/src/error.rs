//! Crate-wide error type.

use std::path::PathBuf;

use thiserror::Error;

/// Errors surfaced by validation, solvers and the experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument violates the documented domain of an operation.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A structural precondition of a solver or protocol step does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Malformed or inconsistent experiment configuration.
    #[error("config error: {0}")]
    Config(String),

    /// Exhaustive enumeration was asked for a graph above its size guard.
    #[error("graph has {vertices} vertices, enumeration limit is {limit}")]
    EnumerationLimit { vertices: usize, limit: usize },

    /// I/O failure, annotated with the file it concerns.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Wrap an I/O error with the path it concerns.
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
