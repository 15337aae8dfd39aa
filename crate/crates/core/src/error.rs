use thiserror::Error;

/// Failures reported by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("infeasible mechanism: {0}")]
    Infeasible(String),
    #[error("mean constraints cannot be met on the evaluation grid")]
    MomentInfeasible,
    #[error("enumeration of {count} supports exceeds the limit of {limit}")]
    TooLarge { count: u128, limit: u128 },
    #[error("regime boundary: {0}")]
    Boundary(String),
    #[error("regime inconsistency: {0}")]
    Regime(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
