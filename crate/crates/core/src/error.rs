use thiserror::Error;

/// Errors raised by the simulator library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A model parameter is outside its admissible range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// An argument violates an operation's precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// The channel carries no signal, so the requested design is undefined.
    #[error("degenerate channel: {0}")]
    DegenerateChannel(&'static str),
    /// A membership event is inconsistent with the current registry.
    #[error("protocol violation: {0}")]
    ProtocolViolation(String),
    /// A membership bitstring could not be decoded.
    #[error("decode error: {0}")]
    Decode(String),
    /// An experiment configuration is unusable.
    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
