use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A request would exceed a configured memory or work cap.
    #[error("budget exceeded: {what} = {requested} is above the cap {cap}; {hint}")]
    Budget {
        what: &'static str,
        requested: u64,
        cap: u64,
        hint: String,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("out of range: {0}")]
    Range(String),

    #[error("no root: {0}")]
    NoRoot(String),

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("invalid segment cache file: {0}")]
    CacheFormat(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
