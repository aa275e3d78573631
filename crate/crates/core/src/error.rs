use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid modulus or localizing constant {0}")]
    InvalidModulus(String),
    #[error("base ring mismatch: {0} vs {1}")]
    BaseMismatch(String, String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("modules live over different algebras")]
    AlgebraMismatch,
    #[error("element is not central")]
    NotCentral,
    #[error("element is not regular: {0}")]
    NotRegular(String),
    #[error("element acts as a unit")]
    UnitElement,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid module map: {0}")]
    InvalidMap(String),
    #[error("invalid structure: {0}")]
    Invalid(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
