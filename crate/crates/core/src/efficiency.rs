//! Efficient tightness and unemployment, the Beveridge elasticity, and the
//! unemployment gap.

use serde::{Deserialize, Serialize};

use crate::equilibrium::{solve, ModelParams, DEFAULT_TOL};
use crate::error::{ModelError, Result};
use crate::matching::MatchingParams;
use crate::roots::{bisect, Bisection};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EfficiencyReport {
    pub theta_star: f64,
    pub u_star: f64,
    pub v_star: f64,
    pub epsilon_at_star: f64,
    /// Actual minus efficient unemployment, as a fraction (0.05 = 5 pp).
    pub gap: f64,
}

/// Elasticity of vacancies with respect to unemployment along the
/// Beveridge curve, in absolute value, at tightness `theta`.
pub fn beveridge_elasticity(theta: f64, m: &MatchingParams) -> Result<f64> {
    if !(theta > 0.0) {
        return Err(ModelError::Domain(format!(
            "Beveridge elasticity requires theta > 0, got {theta}"
        )));
    }
    Ok((m.eta + m.lambda / m.f(theta)) / (1.0 - m.eta))
}

/// The same elasticity written in terms of the unemployment rate.
pub fn beveridge_elasticity_at_unemployment(u: f64, m: &MatchingParams) -> Result<f64> {
    if !(u > 0.0 && u < 1.0) {
        return Err(ModelError::Domain(format!(
            "unemployment rate must lie in (0, 1), got {u}"
        )));
    }
    Ok((m.eta + u / (1.0 - u)) / (1.0 - m.eta))
}

/// Left side of the structural condition for efficient tightness,
/// `kappa / (1 - eta) * (eta * theta + lambda / q(theta))`.
pub fn structural_lhs(theta: f64, m: &MatchingParams) -> f64 {
    // lambda / q(theta) written so that theta = 0 evaluates to 0
    let lambda_over_q = m.lambda * theta.powf(m.eta) / m.mu;
    m.kappa / (1.0 - m.eta) * (m.eta * theta + lambda_over_q)
}

/// Efficient tightness: the unique root of `structural_lhs = 1` on
/// `(0, theta_tau)`. Depends on the matching parameters only.
pub fn efficient_tightness(m: &MatchingParams) -> Result<f64> {
    m.validate()?;
    if m.kappa == 0.0 {
        return Err(ModelError::Domain(
            "efficient tightness is unbounded without recruiting cost".into(),
        ));
    }
    let theta_tau = m.theta_tau();
    let root = bisect(
        |theta| structural_lhs(theta, m) - 1.0,
        0.0,
        theta_tau,
        Bisection {
            rtol: 1e-15,
            max_iter: 200,
        },
    )?;
    Ok(root.x)
}

pub fn efficiency_report(params: &ModelParams) -> Result<EfficiencyReport> {
    let eq = solve(params, DEFAULT_TOL)?;
    let m = &params.matching;
    let theta_star = efficient_tightness(m)?;
    let u_star = m.beveridge_unemployment(theta_star)?;
    let v_star = m.vacancies_on_beveridge(u_star, params.endow.l)?;
    Ok(EfficiencyReport {
        theta_star,
        u_star,
        v_star,
        epsilon_at_star: beveridge_elasticity(theta_star, m)?,
        gap: eq.u - u_star,
    })
}

/// Efficient unemployment rate implied by the matching parameters.
pub fn efficient_unemployment(m: &MatchingParams) -> Result<f64> {
    m.beveridge_unemployment(efficient_tightness(m)?)
}
