use thiserror::Error;

/// Errors raised across the crate.
///
/// Coordinates in messages are 1-based, matching the public API.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("polynomial {poly:#x} is not primitive for degree {m}")]
    NonPrimitivePolynomial { m: u32, poly: u64 },

    #[error("degenerate code: {0}")]
    DegenerateCode(String),

    #[error("invalid code: {0}")]
    InvalidCode(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown code name {0:?}")]
    UnknownCode(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
