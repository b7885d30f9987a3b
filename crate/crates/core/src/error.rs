use thiserror::Error;

/// Errors raised by the numerical engine and its parsers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A polynomial does not vanish to the requested order at the deflation point.
    #[error("insufficient zero multiplicity: derivative of order {order} has modulus {magnitude:e}")]
    InsufficientMultiplicity { order: u32, magnitude: f64 },

    /// An input sequence that must be non-decreasing is not.
    #[error("sequence `{sequence}` is not non-decreasing at index {index}")]
    NotMonotone { sequence: &'static str, index: usize },

    /// Refinement hit its cap while successive estimates still disagreed.
    #[error("quadrature did not converge: last two estimates {previous:e} and {last:e}")]
    Divergence { previous: f64, last: f64 },

    /// A Gram matrix failed its Cholesky factorization.
    #[error("Gram matrix is not numerically positive definite")]
    NotPositiveDefinite,

    /// Malformed input file or command-line value.
    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
