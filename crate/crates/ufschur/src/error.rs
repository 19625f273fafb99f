use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("argument error: {0}")]
    Argument(String),
    #[error("divisibility error: {0}")]
    Divisibility(String),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("substitution error: {0}")]
    Substitution(String),
    #[error("inversion error: {0}")]
    Inversion(String),
    #[error("symmetry error: {0}")]
    Symmetry(String),
    #[error("membership error: {0}")]
    Membership(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
