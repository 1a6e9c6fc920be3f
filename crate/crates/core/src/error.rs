use thiserror::Error;

/// Errors raised by the algebra kernels and the invariant computations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} is out of range (need 2 <= p < 2^32)")]
    ModulusOutOfRange(u64),
    #[error("inverse of zero in F_{0}")]
    DivisionByZero(u64),
    #[error("exponent overflow")]
    ExponentOverflow,
    #[error("operands belong to different rings")]
    RingMismatch,
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },
    #[error("budget exhausted: {0}")]
    BudgetExhausted(String),
    #[error("ideal does not have finite colength")]
    NotArtinian,
    #[error("the unit ideal has no Krull dimension")]
    UnitIdeal,
    #[error("division is not exact")]
    InexactDivision,
    #[error("index {m} does not divide p^e - 1 = {q_minus_one}")]
    IndexNotAdmissible { m: u64, q_minus_one: u64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
