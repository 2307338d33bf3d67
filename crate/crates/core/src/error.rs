use thiserror::Error;

/// Errors produced while building models, coding streams, or parsing containers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("empty input")]
    EmptyInput,

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("truncated stream: needed {needed} bits, {available} available")]
    TruncatedStream { needed: u64, available: u64 },

    #[error("corrupt stream: {0}")]
    CorruptStream(&'static str),

    #[error("index {index} out of bounds for length {len}")]
    OutOfBounds { index: usize, len: usize },

    #[error("occurrence {occurrence} of {what} not found")]
    NotFound { what: &'static str, occurrence: usize },

    #[error("code lengths violate the Kraft inequality")]
    InfeasibleLengths,

    #[error("maximum code length {lmax} is below ceil(lg n) = {min} for n = {n}")]
    LimitTooSmall { lmax: u32, min: u32, n: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid container: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
