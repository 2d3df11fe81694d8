//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("digit set must contain 0")]
    MissingZeroDigit,
    #[error("digit set must have at least two distinct values (got {0})")]
    TooFewDigits(usize),
    #[error("digit values must be non-negative (got {0})")]
    NegativeDigit(String),
    #[error("{0}")]
    InvalidBase(String),
    #[error("operation requires an integer-valued system: {0}")]
    NotIntegerValued(String),
    #[error("operation requires gcd of the digit set to be 1 (got {0})")]
    GcdNotOne(String),
    #[error("operation requires an integer beta (got {0})")]
    NonIntegerBeta(f64),
    #[error("base sequence does not declare {0}")]
    MissingBaseParameter(&'static str),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("quadrature did not converge below {tol:.3e} within {nodes} nodes (last delta {last_delta:.3e})")]
    QuadratureFailure {
        nodes: usize,
        tol: f64,
        last_delta: f64,
    },
    #[error("gamma function pole at non-positive integer {0}")]
    GammaPole(i64),
    #[error("incomplete gamma did not converge after {0} iterations")]
    IncompleteGammaDivergence(usize),
    #[error("s = {s} is within {dist:.3e} of the pole at {pole} (guard radius {guard:.1e})")]
    PoleProximity {
        s: String,
        pole: String,
        dist: f64,
        guard: f64,
    },
    #[error("series truncation failed: {0}")]
    TruncationFailure(String),
    #[error("profile too coarse: need at least {needed} points, got {got}")]
    ProfileTooCoarse { needed: usize, got: usize },
    #[error("table file error: {0}")]
    TableFile(String),
}

pub type Result<T> = std::result::Result<T, Error>;
