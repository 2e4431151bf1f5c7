use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("no satisfaction equilibrium: {reason}")]
    NoEquilibrium {
        reason: String,
        condition_product: Option<f64>,
    },

    #[error("grid of {points} points exceeds the limit of {limit}")]
    ResourceLimit { points: f64, limit: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn no_equilibrium(reason: impl Into<String>, condition_product: Option<f64>) -> Self {
        Error::NoEquilibrium {
            reason: reason.into(),
            condition_product,
        }
    }
}
