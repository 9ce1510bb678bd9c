use thiserror::Error;

/// Errors raised by the exponent engines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument fell outside the range where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// A constellation or configuration failed validation.
    #[error("validation error: {0}")]
    Validation(String),

    /// The integrand produced a non-finite value at a quadrature node.
    #[error("integrand is not finite ({value}) at node ({re}, {im})")]
    Integration { re: f64, im: f64, value: f64 },

    /// A one-dimensional search failed to produce a finite optimum.
    #[error("optimizer failed on [{lo}, {hi}] after {iterations} iterations: {reason}")]
    Optimizer {
        lo: f64,
        hi: f64,
        iterations: usize,
        reason: String,
    },

    /// The input family is outside what an engine supports.
    #[error("unsupported input: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
