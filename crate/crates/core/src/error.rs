use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An input violated a documented invariant. Indices in the message are
    /// 1-based to match the external formats.
    #[error("validation error: {0}")]
    Validation(String),

    #[error("eigensolver did not converge for eigenvalue {index} within {iterations} iterations")]
    NoConvergence { index: usize, iterations: usize },

    #[error("graph with {n} vertices exceeds the exhaustive-search cap of {cap}")]
    UnsupportedSize { n: usize, cap: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Validation(msg.into()))
}
