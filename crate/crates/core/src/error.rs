use thiserror::Error;

/// Errors raised by the numerical and exact kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Argument is well-typed but violates an operation precondition.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// Integration task failed validation before any evaluation.
    #[error("invalid integration task: {0}")]
    InvalidTask(String),

    /// The integrand returned NaN or an infinity.
    #[error("integrand is not finite at x = {abscissa:e} (value {value})")]
    NonFiniteIntegrand { abscissa: f64, value: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
