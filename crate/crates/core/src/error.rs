use thiserror::Error;

use crate::term::ParseError;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Usage(String),
    #[error("unbound variable '{0}'")]
    UnboundVariable(String),
    #[error("term outside the supported fragment: {0}")]
    OutOfFragment(String),
    #[error("invalid budget: {0}")]
    InvalidBudget(String),
    #[error("theta must be nonzero: {0}")]
    ZeroTheta(String),
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
