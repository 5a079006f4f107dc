use thiserror::Error;

use crate::exactla::Field;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("p not prime: {0}")]
    NotPrime(u64),
    #[error("modulus {0} outside [2, 2^31)")]
    ModulusOutOfRange(u64),
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(Field, Field),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid entry {0:?}")]
    InvalidEntry(String),
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("invalid chain map: {0}")]
    InvalidChainMap(String),
    #[error("invalid homotopy: {0}")]
    InvalidHomotopy(String),
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("period mismatch: {0} vs {1}")]
    PeriodMismatch(usize, usize),
    #[error("invalid graded module: {0}")]
    InvalidModule(String),
    #[error("flag differential does not square to zero")]
    FlagNotSquareZero,
    #[error("double complex totalization does not square to zero at total degree {0}")]
    TotalizationNotSquareZero(i64),
    #[error("{0} out of range")]
    OutOfRange(String),
    #[error("{pointer}: {message}")]
    Schema { pointer: String, message: String },
}
