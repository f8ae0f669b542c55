use thiserror::Error;

/// Failure classes shared by the library, the CLI and the FFI layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Bad arguments or unsupported parameters.
    #[error("usage error: {0}")]
    Usage(String),
    /// Mathematically invalid input (not a unit, not a valid pair, not of order p, ...).
    #[error("domain error: {0}")]
    Domain(String),
    /// A bounded search ran out of budget.
    #[error("resource limit reached: {0}")]
    Resource(String),
    /// An exact post-check failed.
    #[error("internal verification failure: {0}")]
    Internal(String),
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) => 2,
            Error::Domain(_) => 3,
            Error::Resource(_) | Error::Internal(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Usage(msg.into()))
}

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
