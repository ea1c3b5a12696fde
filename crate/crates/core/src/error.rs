use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("quiver has an oriented cycle")]
    Cyclic,
    #[error("incompatible arguments: {0}")]
    Mismatch(String),
    #[error("internal assertion failed: {0}")]
    Assertion(String),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn mismatch(msg: impl Into<String>) -> Self {
        Error::Mismatch(msg.into())
    }

    pub fn assertion(msg: impl Into<String>) -> Self {
        Error::Assertion(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
