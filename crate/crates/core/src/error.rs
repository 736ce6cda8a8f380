use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("argument out of domain: {0}")]
    OutOfDomain(String),

    #[error("model not applicable: {0}")]
    ModelInapplicable(String),

    #[error("iteration failed to converge after {iterations} steps")]
    SolverFailure { iterations: usize },

    #[error("loss of precision: {0}")]
    PrecisionLoss(String),

    #[error("run aborted: {failures} of {trials} trials failed")]
    RunAborted { failures: usize, trials: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{name} must be finite, got {v}")))
    }
}
