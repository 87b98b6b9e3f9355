use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument violates an operation's precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Two operands disagree on dimension.
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// A dense object would exceed the configured size cap.
    #[error("resource budget exceeded: {what} needs {needed}, cap is {cap}")]
    Budget {
        what: &'static str,
        needed: u128,
        cap: u128,
    },

    /// The requested mode is outside what is implemented.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Exact integer arithmetic overflowed.
    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// A cache file does not follow the binary layout.
    #[error("malformed cache file: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
