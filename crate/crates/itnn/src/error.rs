//! Error type shared by every module in the crate.

use alloc::string::String;

/// Errors raised by training, prediction, encoding, and generation.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// Two vectors that must have equal length do not.
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    /// A precondition on an argument was violated.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Two training samples have identical inputs but different outputs.
    ///
    /// The indices refer to positions in the sample sequence passed to
    /// training, so the caller can report the offending rows.
    #[error("training samples {first} and {second} have identical inputs but different outputs")]
    ConflictingSamples { first: usize, second: usize },

    /// A generator produced a non-finite or runaway value.
    #[error("series diverged at step {step}")]
    Diverged { step: usize },
}

pub type Result<T> = core::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
