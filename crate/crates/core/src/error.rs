use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("polynomial is reducible over the rationals: {0}")]
    Reducible(String),
    #[error("integral basis rejected: {0}")]
    IntegralBasis(String),
    #[error("elements are not linearly independent over Q")]
    Dependent,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("overflow: {0}")]
    Overflow(String),
    #[error("insufficient precision: {0}")]
    Precision(String),
    #[error("indeterminate: {0}")]
    Indeterminate(String),
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("malformed file: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
