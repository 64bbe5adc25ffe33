//! Error types shared across the core library.

use thiserror::Error;

/// Errors raised by the core library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Param(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("rank deficiency: {0}")]
    RankDeficient(String),
    #[error("linear system has no solution")]
    NoSolution,
    #[error("instance too large for exhaustive enumeration: {0}")]
    TooLarge(String),
    #[error("sampling retry cap exceeded: {0}")]
    RetryCap(&'static str),
    #[error("format error at byte {offset}: {msg}")]
    Format { offset: usize, msg: String },
    #[error(transparent)]
    Decode(#[from] DecodeFailure),
    #[error("KEM decapsulation rejected")]
    Reject,
}

/// Machine-readable reason attached to a decoding failure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FailureReason {
    RemainderNonzero,
    RadiusExceeded,
    RankError,
}

impl FailureReason {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::RemainderNonzero => "remainder-nonzero",
            Self::RadiusExceeded => "radius-exceeded",
            Self::RankError => "rank-error",
        }
    }
}

/// A decoding failure, optionally tagged with the EGK block that failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("decoding failure ({}){}", reason.as_str(), block.map(|b| format!(" in block {b}")).unwrap_or_default())]
pub struct DecodeFailure {
    pub reason: FailureReason,
    pub block: Option<usize>,
}

impl DecodeFailure {
    pub fn new(reason: FailureReason) -> Self {
        Self { reason, block: None }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Param(msg.into()))
}

pub(crate) fn dim<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Dimension(msg.into()))
}
