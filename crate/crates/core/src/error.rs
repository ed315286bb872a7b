use thiserror::Error;

/// Errors produced by kernel evaluation, special functions and the Monte Carlo oracle.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum KernelError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("overflow: {0}")]
    Overflow(String),
    #[error("convergence failure: {0}")]
    Convergence(String),
    #[error("tolerance not met: requested {requested:e}, achieved {achieved:e}")]
    ToleranceNotMet { requested: f64, achieved: f64 },
    #[error("integral diverges: {0}")]
    Divergent(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("unsupported domain: {0}")]
    Unsupported(String),
}

impl KernelError {
    /// True for errors that mean "evaluated, but not to the requested accuracy".
    pub fn is_tolerance(&self) -> bool {
        matches!(
            self,
            KernelError::ToleranceNotMet { .. } | KernelError::Convergence(_) | KernelError::Divergent(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, KernelError>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(KernelError::Domain(msg.into()))
}

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(KernelError::Parameter(msg.into()))
}
