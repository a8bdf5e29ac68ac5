use std::path::PathBuf;
use thiserror::Error;

/// Error type shared by every module in the crate.
///
/// The variants map onto the CLI exit codes: `Domain` and `Contract` are
/// caller mistakes (exit 2 when they reach the CLI), `NumericIntegrity`
/// signals a non-finite or negative-mass result that must never be
/// serialized (exit 3), and `Io` wraps filesystem failures with the path
/// that caused them.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside the mathematical domain of an operation
    /// (state outside `[0, k]`, negative time, inadmissible window scale).
    #[error("domain error: {0}")]
    Domain(String),

    /// An input violates a structural contract (non-pmf weight vector,
    /// mismatched lengths, uniformization rate below the exit-rate bound).
    #[error("contract violation: {0}")]
    Contract(String),

    /// A computation produced a value that fails basic integrity checks
    /// (NaN, infinity, probability mass outside tolerance).
    #[error("numeric integrity failure: {0}")]
    NumericIntegrity(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub(crate) fn numeric(msg: impl Into<String>) -> Self {
        Error::NumericIntegrity(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
