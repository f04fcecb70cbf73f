use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// The caller asked for something the operation does not support.
    #[error("usage error: {0}")]
    Usage(String),
    /// Malformed or inconsistent input data.
    #[error("input error: {0}")]
    Input(String),
    /// A configured size or memory cap was exceeded.
    #[error("resource limit: {0}")]
    Resource(String),
    /// A solver produced a witness that failed verification.
    #[error("internal consistency error: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }
}
