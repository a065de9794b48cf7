use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("p must be an odd prime (got {0})")]
    InvalidPrime(u64),

    #[error("operands belong to different groups (p = {left} and p = {right})")]
    MismatchedPrime { left: u64, right: u64 },

    #[error("{value} is not a unit modulo {modulus}")]
    NotAUnit { value: u64, modulus: u64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("p = {p} exceeds the exhaustive-sweep cap of {cap}; raise the cap explicitly")]
    AboveOracleCap { p: u64, cap: u64 },

    /// A computed object contradicts a structural fact the rest of the crate relies on.
    #[error("internal consistency violation: {0}")]
    Internal(String),
}
