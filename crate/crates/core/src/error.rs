use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EtaError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{d} is not an exact divisor of {n}")]
    NotExactDivisor { d: u64, n: u64 },
    #[error("{d} does not divide {n}")]
    NotDivisor { d: u64, n: u64 },
    #[error("malformed exponent map: bad token `{0}`")]
    Parse(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("series is zero within truncation {0}; leading order undetermined at this truncation")]
    Undetermined(usize),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, EtaError>;
