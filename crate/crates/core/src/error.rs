use thiserror::Error;

/// Errors raised by constructions, moves and certificate checks.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("resource cap `{cap}` exceeded (limit {limit})")]
    ResourceCap { cap: &'static str, limit: usize },

    #[error("move rejected: {0}")]
    MoveRejected(String),

    #[error("certificate unavailable: {0}")]
    CertificateUnavailable(String),

    #[error("certificate invalid: {0}")]
    CertificateInvalid(String),

    #[error("incomplete data: {0}")]
    IncompleteData(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
