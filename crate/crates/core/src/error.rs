use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("boundary maps do not compose to zero at degree {0}")]
    NotAComplex(i64),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("not a direct summand: {0}")]
    NotASummand(String),
    #[error("infeasible parameters: {0}")]
    Infeasible(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Invalid(msg.into()))
}
