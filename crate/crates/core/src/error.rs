use thiserror::Error;

use crate::setexpr::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("window would be empty: {0}")]
    EmptyWindow(String),
    #[error("window mismatch: {left} vs {right}")]
    WindowMismatch { left: u64, right: u64 },
    #[error("element {element} outside window [1..{window}]")]
    OutOfWindow { element: u64, window: u64 },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
    #[error("{what} exceeds limit {limit} (got {got})")]
    TooLarge { what: &'static str, limit: u64, got: u64 },
    #[error("invalid block system: {0}")]
    InvalidBlocks(String),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}
