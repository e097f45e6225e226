use crate::quad::QuadResult;

/// Errors raised by the algebra, kernel, quadrature and solver layers.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("singular evaluation: {0}")]
    Singular(String),

    #[error("quadrature did not reach tolerance {tol:e} (estimate {:e})", partial.err_estimate)]
    Accuracy { tol: f64, partial: QuadResult },

    #[error("principal-value family does not converge: {0}")]
    Divergence(String),

    #[error("invariant violated: {0}")]
    InvariantViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

pub(crate) fn singular(msg: impl Into<String>) -> Error {
    Error::Singular(msg.into())
}
