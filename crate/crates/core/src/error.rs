use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Caller supplied arguments outside the operation's contract.
    #[error("usage error: {0}")]
    Usage(String),
    /// The operation is not defined on the given input (e.g. the intertwiner
    /// applied outside `V_Q`).
    #[error("domain error: {0}")]
    Domain(String),
    /// An internal consistency check failed. Signals a bug, not bad input.
    #[error("structural failure: {0}")]
    Structural(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
