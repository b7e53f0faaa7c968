use thiserror::Error;

/// Errors raised by the numerical kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Argument outside the domain of a special function or kernel.
    #[error("domain error: {0}")]
    Domain(String),
    /// Matrix or vector dimensions do not fit the operation.
    #[error("shape error: {0}")]
    Shape(String),
    /// Input violates a structural requirement (e.g. not Hermitian).
    #[error("validation error: {0}")]
    Validation(String),
    /// Invalid configuration parameter.
    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
