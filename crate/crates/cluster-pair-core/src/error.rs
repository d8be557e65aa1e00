use alloc::string::String;
use core::fmt;

/// Errors produced by the core algorithms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoreError {
    /// An input violated a documented precondition.
    InvalidInput(String),
    /// The exhaustive matching oracle was asked for an instance beyond its
    /// factorial enumeration limit.
    OracleTooLarge { max_side: usize, limit: usize },
}

impl fmt::Display for CoreError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoreError::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            CoreError::OracleTooLarge { max_side, limit } => write!(
                f,
                "brute-force oracle limited to max(k1, k2) <= {limit}, got {max_side}"
            ),
        }
    }
}

impl core::error::Error for CoreError {}

pub type Result<T> = core::result::Result<T, CoreError>;
