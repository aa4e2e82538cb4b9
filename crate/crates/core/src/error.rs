use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the simulation stack.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("matrix is not Hermitian: max deviation {deviation:.3e} exceeds {tol:.1e}")]
    NotHermitian { deviation: f64, tol: f64 },

    #[error("trace is {trace:.12} (|Tr - 1| exceeds {tol:.1e})")]
    Trace { trace: f64, tol: f64 },

    #[error(
        "matrix is not positive semidefinite: min eigenvalue {min_eigenvalue:.3e} below -{tol:.1e}"
    )]
    NotPsd { min_eigenvalue: f64, tol: f64 },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("matrix is degenerate: no eigenvalue above cutoff {cutoff:.1e}")]
    Degenerate { cutoff: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid codebook: {0}")]
    InvalidCodebook(String),

    #[error("invalid symbol {symbol} for alphabet of size {alphabet}")]
    InvalidSymbol { symbol: i32, alphabet: usize },

    #[error("sequence lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("cannot compute an error rate over an empty sequence")]
    EmptySequence,

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("channel `{name}`: {source}")]
    Channel {
        name: String,
        #[source]
        source: Box<Error>,
    },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn in_channel(self, name: &str) -> Self {
        Error::Channel {
            name: name.to_owned(),
            source: Box::new(self),
        }
    }
}
