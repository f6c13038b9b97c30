//! Matching-market primitives: Cobb-Douglas matching rates, the Beveridge
//! curve, and the recruiting wedge.
//!
//! All rates are per month.

use serde::{Deserialize, Serialize};

use crate::error::{ModelError, Result};

/// Parameters of the matching process.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatchingParams {
    /// Matching efficacy: matches per unit time at unit tightness.
    pub mu: f64,
    /// Matching elasticity with respect to jobseekers, in (0, 1).
    pub eta: f64,
    /// Job-separation rate.
    pub lambda: f64,
    /// Recruiters per vacancy. Zero is accepted as the frictionless limit,
    /// in which case `theta_tau` is infinite.
    pub kappa: f64,
}

impl Default for MatchingParams {
    /// Repository calibration; not taken from any estimation.
    fn default() -> Self {
        MatchingParams {
            mu: 0.60,
            eta: 0.5,
            lambda: 0.035,
            kappa: 0.92,
        }
    }
}

impl MatchingParams {
    pub fn validate(&self) -> Result<()> {
        let MatchingParams {
            mu,
            eta,
            lambda,
            kappa,
        } = *self;
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(ModelError::Config(format!("mu must be positive, got {mu}")));
        }
        if !(eta > 0.0 && eta < 1.0) {
            return Err(ModelError::Config(format!(
                "eta must lie in (0, 1), got {eta}"
            )));
        }
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(ModelError::Config(format!(
                "lambda must be positive, got {lambda}"
            )));
        }
        if !(kappa >= 0.0 && kappa.is_finite()) {
            return Err(ModelError::Config(format!(
                "kappa must be non-negative, got {kappa}"
            )));
        }
        Ok(())
    }

    /// Tightness at which the vacancy-filling rate equals `kappa * lambda`,
    /// i.e. where the recruiting wedge has its pole.
    pub fn theta_tau(&self) -> f64 {
        (self.mu / (self.kappa * self.lambda)).powf(1.0 / self.eta)
    }

    /// `f(theta) = mu * theta^(1 - eta)`.
    pub fn job_finding_rate(&self, theta: f64) -> Result<f64> {
        check_tightness(theta)?;
        Ok(self.f(theta))
    }

    /// `q(theta) = mu * theta^(-eta)`; diverges at zero.
    pub fn vacancy_filling_rate(&self, theta: f64) -> Result<f64> {
        if !(theta > 0.0) || theta.is_nan() {
            return Err(ModelError::Domain(format!(
                "vacancy-filling rate requires theta > 0, got {theta}"
            )));
        }
        Ok(self.q(theta))
    }

    /// Unemployment rate on the Beveridge curve, `lambda / (lambda + f(theta))`.
    pub fn beveridge_unemployment(&self, theta: f64) -> Result<f64> {
        check_tightness(theta)?;
        Ok(self.u(theta))
    }

    /// `tau(theta) = kappa * lambda / (q(theta) - kappa * lambda)` on
    /// `[0, theta_tau)`.
    pub fn recruiting_wedge(&self, theta: f64) -> Result<f64> {
        check_tightness(theta)?;
        let theta_tau = self.theta_tau();
        if theta >= theta_tau {
            return Err(ModelError::BeyondRecruitingCapacity { theta, theta_tau });
        }
        if theta == 0.0 {
            return Ok(0.0);
        }
        let cost = self.kappa * self.lambda;
        let wedge = cost / (self.q(theta) - cost);
        if !(wedge >= 0.0 && wedge.is_finite()) {
            // q(theta) rounds onto kappa * lambda just below theta_tau.
            return Err(ModelError::BeyondRecruitingCapacity { theta, theta_tau });
        }
        Ok(wedge)
    }

    /// Vacancies sustaining unemployment rate `u` on the Beveridge curve for
    /// a labour force of size `l`.
    pub fn vacancies_on_beveridge(&self, u: f64, l: f64) -> Result<f64> {
        if !(u > 0.0 && u < 1.0) {
            return Err(ModelError::Domain(format!(
                "unemployment rate must lie in (0, 1), got {u}"
            )));
        }
        if !(l > 0.0) {
            return Err(ModelError::Domain(format!(
                "labour force must be positive, got {l}"
            )));
        }
        Ok(self.v_of_u(u, l))
    }

    /// Tightness on the Beveridge curve at unemployment rate `u`.
    pub fn tightness_for_unemployment(&self, u: f64) -> Result<f64> {
        if !(u > 0.0 && u <= 1.0) {
            return Err(ModelError::Domain(format!(
                "unemployment rate must lie in (0, 1], got {u}"
            )));
        }
        let f = self.lambda * (1.0 - u) / u;
        Ok((f / self.mu).powf(1.0 / (1.0 - self.eta)))
    }

    pub(crate) fn f(&self, theta: f64) -> f64 {
        self.mu * theta.powf(1.0 - self.eta)
    }

    pub(crate) fn q(&self, theta: f64) -> f64 {
        self.mu * theta.powf(-self.eta)
    }

    pub(crate) fn u(&self, theta: f64) -> f64 {
        self.lambda / (self.lambda + self.f(theta))
    }

    pub(crate) fn v_of_u(&self, u: f64, l: f64) -> f64 {
        (self.lambda * (1.0 - u) / (self.mu * u.powf(self.eta))).powf(1.0 / (1.0 - self.eta)) * l
    }
}

fn check_tightness(theta: f64) -> Result<()> {
    if theta >= 0.0 {
        Ok(())
    } else {
        Err(ModelError::Domain(format!(
            "tightness must be non-negative, got {theta}"
        )))
    }
}
