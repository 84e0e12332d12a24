use thiserror::Error;

/// Errors raised by the library.
///
/// The variants line up with the exit codes of the command-line runner:
/// usage, domain and parse problems are validation failures, while
/// [`Error::Guard`] marks a request that would exceed a resource limit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("resource guard exceeded: {0}")]
    Guard(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("point is not in the attractor (fails at depth {depth})")]
    NotInSet { depth: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Usage(msg.into()))
}

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn guard<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Guard(msg.into()))
}
