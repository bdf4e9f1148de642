use thiserror::Error;

/// Errors raised by the height, pairing and polynomial routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A caller-supplied value violates a documented precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An iterative numerical method failed to meet its tolerance.
    #[error("numeric failure: {message} (residual {residual:e})")]
    Numeric { message: String, residual: f64 },

    /// The operation is undefined for this algebraic number (e.g. alpha = 0).
    #[error("domain error: {0}")]
    Domain(String),

    /// The measure variant is not supported by this operation.
    #[error("unsupported measure: {0}")]
    UnsupportedMeasure(String),

    /// A precondition on a radius profile was not met (e.g. gamma(t) != 1).
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// Mutual energy between measures sharing an atom diverges.
    #[error("diagonal divergence: {0}")]
    DiagonalDivergence(String),

    /// The search interval does not admit a minimizer.
    #[error("no minimum: {0}")]
    NoMinimum(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// True for errors caused by numerical non-convergence rather than bad input.
    pub fn is_numeric(&self) -> bool {
        matches!(self, Error::Numeric { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
