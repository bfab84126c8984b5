use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    /// Two independent counting routes disagreed.
    #[error("n = {n}: mobius count {mobius} != oracle count {oracle}")]
    Mismatch { n: u64, mobius: u64, oracle: u64 },

    #[error("table format: {0}")]
    Format(String),

    #[error("n = {n}: {source}")]
    AtN { n: u64, source: Box<Error> },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
