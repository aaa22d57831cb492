use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("p = {0} is not an odd prime below 32")]
    InvalidPrime(u32),
    #[error("parameter mismatch: {0}")]
    ParameterMismatch(String),
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("map is not equivariant: {0}")]
    NotEquivariant(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("no chain model: {0}")]
    NoChainModel(String),
    #[error("unbased complex passed where a based one is required: {0}")]
    Unbased(String),
    #[error("invariant factor does not fit in 64 bits: {0}")]
    Overflow(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("extension problem at total degree {degree}: {detail}")]
    Extension { degree: i64, detail: String },
}
