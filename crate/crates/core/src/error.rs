use thiserror::Error;

/// Errors raised by geometric evaluation, quadrature and flow integration.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point {coords:?} lies outside the chart domain: {reason}")]
    OutOfDomain { coords: Vec<f64>, reason: String },

    #[error("flow left the chart domain at t = {time} (point {coords:?})")]
    DomainEscape { time: f64, coords: Vec<f64> },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    Dimension { expected: usize, found: usize },

    #[error("quadrature did not converge: best estimate {best}, error estimate {error_estimate}")]
    NonConvergence { best: f64, error_estimate: f64 },

    #[error("flow integrator did not settle: successive refinements differ by {difference}")]
    IntegratorNonConvergence { difference: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid configuration: {0}")]
    Configuration(String),

    #[error("operation not supported: {0}")]
    Unsupported(String),
}

impl Error {
    /// True for numerical failures (as opposed to invalid input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NonConvergence { .. }
                | Error::IntegratorNonConvergence { .. }
                | Error::DomainEscape { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
