use thiserror::Error;

/// Errors raised by the arithmetic, protocol and attack layers.
///
/// Protocol aborts (the λ outcome) are not errors; they are reported through
/// [`crate::Outcome::Abort`] and the abort variants of the ideal and composed
/// outcomes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime below 2^31")]
    InvalidModulus(u64),
    #[error("operands live in different fields (q = {left} vs q = {right})")]
    ModulusMismatch { left: u32, right: u32 },
    #[error("zero has no multiplicative inverse")]
    InversionOfZero,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("party state machine: {0}")]
    UnexpectedState(&'static str),
    #[error(transparent)]
    Decode(#[from] DecodeError),
}

/// Framing failures on the wire. Out-of-field values are not decode errors for
/// protocol messages; they survive decoding and are rejected by the parties.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecodeError {
    #[error("empty buffer")]
    Empty,
    #[error("unknown message tag {0:#04x}")]
    UnknownTag(u8),
    #[error("expected tag {expected:#04x}, found {found:#04x}")]
    WrongTag { expected: u8, found: u8 },
    #[error("buffer is {actual} bytes, header implies {expected}")]
    Length { expected: usize, actual: usize },
    #[error("truncated header")]
    TruncatedHeader,
    #[error("setup value {value} is not in F_{q}")]
    SetupValueOutOfField { value: u64, q: u32 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
