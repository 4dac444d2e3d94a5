use thiserror::Error;

pub type Result<T> = std::result::Result<T, LevyError>;

/// Errors raised by the estimation library.
///
/// The harness maps `Config` and `Domain` to exit code 2 and the estimation
/// variants to exit code 3.
#[derive(Debug, Error)]
pub enum LevyError {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("estimation failed: {0}")]
    EstimationFailure(String),

    #[error("degenerate confidence band: {0}")]
    DegenerateBand(String),

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed input: {0}")]
    Parse(String),
}

impl LevyError {
    pub fn config(msg: impl Into<String>) -> Self {
        LevyError::Config(msg.into())
    }

    pub fn domain(msg: impl Into<String>) -> Self {
        LevyError::Domain(msg.into())
    }

    /// True for failures that stem from the data rather than the setup.
    pub fn is_estimation_failure(&self) -> bool {
        matches!(
            self,
            LevyError::EstimationFailure(_)
                | LevyError::DegenerateBand(_)
                | LevyError::Quadrature(_)
        )
    }
}
