use thiserror::Error;

/// Errors raised by the model operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    /// An argument lies outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// Tightness at or beyond the pole of the recruiting wedge.
    #[error(
        "tightness {theta} is beyond the productive capacity of recruiting (theta_tau = {theta_tau})"
    )]
    BeyondRecruitingCapacity { theta: f64, theta_tau: f64 },

    /// A parameter violates its invariant.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// The return on wealth is at least the discount rate, so the AD curve
    /// has no interior solution.
    #[error(
        "no interior solution: delta ({delta}) must exceed r - tau_w ({net_return}) where r = i - pi"
    )]
    NoInteriorSolution { delta: f64, net_return: f64 },

    /// Explicit integration step too large for the decay rate of the ODE.
    #[error("step size dt = {dt} too large for decay rate {rate}: dt * rate must not exceed 0.5")]
    StepSize { dt: f64, rate: f64 },

    /// Root bracketing or iteration broke down.
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl ModelError {
    /// `true` for errors caused by the inputs rather than by the numerics.
    pub fn is_configuration(&self) -> bool {
        !matches!(self, ModelError::Numerical(_))
    }
}

pub type Result<T, E = ModelError> = std::result::Result<T, E>;
