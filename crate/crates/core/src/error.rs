use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("not divisible: {0}")]
    NotDivisible(String),

    #[error("element is not in the domain subgroup H: {0}")]
    NotInH(String),

    #[error("element is not invertible: {0}")]
    NotInvertible(String),

    #[error("denominator vanishes at 1: {0}")]
    DenominatorVanishes(String),

    #[error("instance contract violated: {0}")]
    ContractViolation(String),

    #[error("invalid instance configuration: {0}")]
    InvalidConfig(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("enumeration bound exceeded: {0}")]
    BoundExceeded(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
