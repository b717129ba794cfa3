//! Error type shared by all modules.

use thiserror::Error;

/// Errors carry enough context to be rendered as CLI diagnostics.  The
/// variants map onto process exit codes: invalid input is 2, capacity is 3,
/// a failed property (with witness) is 1.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("capacity exceeded in {what}: needed {needed}, cap {cap}")]
    Capacity {
        what: String,
        needed: u128,
        cap: u128,
    },

    /// A search hit its node budget without a verdict.  Distinct from a
    /// definite "absent" answer.
    #[error("search inconclusive: {0} (node cap exceeded)")]
    Inconclusive(String),

    #[error("property failed: {0}")]
    PropertyFailed(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn capacity(what: impl Into<String>, needed: u128, cap: u128) -> Self {
        Error::Capacity {
            what: what.into(),
            needed,
            cap,
        }
    }

    /// Exit code the CLI maps this error to.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidInput(_) => 2,
            Error::Capacity { .. } => 3,
            Error::Inconclusive(_) => 3,
            Error::PropertyFailed(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
