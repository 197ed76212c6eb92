use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A numerical invariant broke somewhere upstream (negative probability,
    /// non-normalized distribution, ...).
    #[error("internal error: {0}")]
    Internal(String),

    /// `p > 0` where `q = 0` in a KL divergence.
    #[error("KL divergence undefined: p[{index}] = {p} but q[{index}] = 0")]
    UndefinedDivergence { index: usize, p: f64 },

    #[error("message source is empty: {0}")]
    EmptySource(String),

    #[error("{path}: {source}")]
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

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
