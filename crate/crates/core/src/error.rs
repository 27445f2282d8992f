//! Error type shared by every module of the crate.

use thiserror::Error;

/// Everything that can go wrong inside the toolkit.
///
/// Non-isomorphism is never an error: deciders return `Ok(None)` for it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    NotPrime(u32),
    #[error("modulus {p} exceeds the configured limit {limit}")]
    ModulusTooLarge { p: u32, limit: u32 },
    #[error("division by zero in GF({0})")]
    DivisionByZero(u32),
    #[error("field mismatch: GF({0}) vs GF({1})")]
    FieldMismatch(u32, u32),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is singular")]
    Singular,
    #[error("enumeration refused: {what} needs {required} elements, budget is {budget}")]
    Budget {
        what: String,
        required: u128,
        budget: u128,
    },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("witness invalid: {0}")]
    WitnessInvalid(String),
    #[error("recovery-unsupported: {0}")]
    RecoveryUnsupported(String),
    #[error("unsupported characteristic {0}")]
    UnsupportedCharacteristic(u32),
    #[error("relation violated: {0}")]
    Relation(String),
    #[error("oracle inconsistent at step {step}: {detail}")]
    OracleInconsistent { step: usize, detail: String },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn dim_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Dimension(msg.into()))
}
