use thiserror::Error;

/// Errors raised by strategy construction, evaluation and verification.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SearchError {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// The family collapses to a searcher that never leaves the origin.
    #[error("degenerate strategy: {0}")]
    DegenerateStrategy(String),

    #[error("wrong regime: {0}")]
    WrongRegime(String),

    #[error("step {j} out of range for a strategy with {len} steps")]
    StepOutOfRange { j: usize, len: usize },

    #[error("step {0} is not feasible")]
    InfeasibleStep(usize),

    #[error("horizon {horizon} too small, need at least {min}")]
    HorizonTooSmall { horizon: usize, min: usize },

    #[error("target not found within {max_steps} steps")]
    TargetNotFound { max_steps: usize },

    #[error("target distance {distance} is below the lower bound {lambda}")]
    TargetTooClose { distance: f64, lambda: f64 },

    #[error("target ray {ray} out of range for {rays} rays")]
    RayOutOfRange { ray: usize, rays: usize },

    /// The admissible interval for the first step is empty.
    #[error("vacuous regime: {0}")]
    VacuousRegime(String),

    #[error("invalid strategy spec: {0}")]
    InvalidSpec(String),
}

pub type Result<T, E = SearchError> = std::result::Result<T, E>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> SearchError {
    SearchError::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
