use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on the inputs was violated.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// A resource cap (dimension, memory) would be exceeded.
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    /// An iterative routine failed to converge or produced a non-finite value.
    #[error("numeric failure: {0}")]
    Numeric(String),
    /// An exhaustive search did not find the object it was asked for.
    #[error("search failure: {0}")]
    SearchFailure(String),
    /// The moment constraints cannot be met on the given discretization.
    #[error("infeasible: {0}")]
    Infeasible(String),
    /// Two routes that must agree disagreed beyond tolerance.
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
}

pub type Result<T> = core::result::Result<T, Error>;
