//! AS = AD equilibrium and the quantities derived from it.

use serde::{Deserialize, Serialize};

use crate::curves::{
    demand_shift, AdCurve, AsCurve, EndowmentParams, PolicyParams, PreferenceParams,
};
use crate::error::{ModelError, Result};
use crate::matching::MatchingParams;
use crate::roots::{bisect, Bisection};

/// Default relative tolerance on equilibrium tightness.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Lower edge of the equilibrium bracket before any widening.
const BRACKET_FLOOR: f64 = 1e-12;
/// Relative distance kept from the wedge pole at the upper bracket edge.
const POLE_MARGIN: f64 = 1e-9;

/// Complete parameterization of the model.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ModelParams {
    pub matching: MatchingParams,
    pub prefs: PreferenceParams,
    pub endow: EndowmentParams,
    pub policy: PolicyParams,
}

impl ModelParams {
    pub fn validate(&self) -> Result<()> {
        self.matching.validate()?;
        self.prefs.validate()?;
        self.endow.validate()?;
        self.policy.validate()?;
        demand_shift(&self.prefs, &self.policy)?;
        Ok(())
    }

    pub fn with_policy(&self, policy: PolicyParams) -> ModelParams {
        ModelParams { policy, ..*self }
    }

    pub fn with_nominal_rate(&self, i: f64) -> ModelParams {
        self.with_policy(PolicyParams { i, ..self.policy })
    }

    pub fn with_wealth_tax(&self, tau_w: f64) -> ModelParams {
        self.with_policy(PolicyParams {
            tau_w,
            ..self.policy
        })
    }

    pub fn with_mu_wealth(&self, mu_wealth: f64) -> ModelParams {
        ModelParams {
            prefs: PreferenceParams {
                mu_wealth,
                ..self.prefs
            },
            ..*self
        }
    }

    /// Output demanded at zero tightness, `[(delta - r + tau_w) / x'(0)]^sigma`.
    pub fn demand_level(&self) -> Result<f64> {
        Ok(AdCurve::new(&self.prefs, &self.policy, &self.matching)?.level())
    }
}

/// Solved equilibrium.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Equilibrium {
    pub theta: f64,
    pub y: f64,
    pub u: f64,
    pub n: f64,
    pub v: f64,
    pub c: f64,
    pub wedge: f64,
    pub r: f64,
    pub gamma0: f64,
    pub welfare_flow: f64,
    pub residual: f64,
}

/// Finds the unique tightness at which the AS and AD curves cross.
///
/// `tol` is the relative tolerance on tightness.
pub fn solve(params: &ModelParams, tol: f64) -> Result<Equilibrium> {
    params.validate()?;
    let m = &params.matching;
    let supply = AsCurve::new(m, &params.endow);
    let demand = AdCurve::new(&params.prefs, &params.policy, m)?;

    let excess_supply = |theta: f64| -> f64 {
        let wedge = match m.recruiting_wedge(theta) {
            Ok(w) => w,
            Err(_) => return f64::NAN,
        };
        supply.output_unchecked(theta, m.u(theta)) - demand.output_with_wedge(wedge)
    };

    let (lo, hi) = bracket(params, &excess_supply, demand.level())?;
    let root = bisect(
        excess_supply,
        lo,
        hi,
        Bisection {
            rtol: tol,
            max_iter: 200,
        },
    )?;
    let theta = root.x;
    let wedge = m.recruiting_wedge(theta)?;
    let residual =
        (supply.output_unchecked(theta, m.u(theta)) - demand.output_with_wedge(wedge)).abs();
    Ok(derive(params, theta, residual))
}

/// Initial bracket `[lo, hi]` with the excess supply negative at `lo` and
/// positive at `hi`.
fn bracket<F: Fn(f64) -> f64>(params: &ModelParams, g: &F, level: f64) -> Result<(f64, f64)> {
    let m = &params.matching;
    let hi = if m.kappa > 0.0 {
        let theta_tau = m.theta_tau();
        let mut margin = POLE_MARGIN;
        loop {
            let hi = theta_tau * (1.0 - margin);
            if g(hi) > 0.0 {
                break hi;
            }
            margin /= 10.0;
            if margin < 1e-15 {
                return Err(ModelError::Numerical(format!(
                    "aggregate demand still exceeds supply next to theta_tau = {theta_tau}"
                )));
            }
        }
    } else {
        let capacity = params.endow.capacity();
        if level >= capacity {
            return Err(ModelError::Config(format!(
                "without recruiting cost, demand at zero tightness ({level}) must be below capacity ({capacity})"
            )));
        }
        let mut hi = 1.0;
        while !(g(hi) > 0.0) {
            hi *= 2.0;
            if !hi.is_finite() {
                return Err(ModelError::Numerical(
                    "could not bracket equilibrium from above".into(),
                ));
            }
        }
        hi
    };

    let mut lo = BRACKET_FLOOR.min(0.5 * hi);
    while !(g(lo) < 0.0) {
        lo *= 1e-3;
        if lo < 1e-300 {
            return Err(ModelError::Numerical(format!(
                "aggregate demand ({level}) too small to bracket equilibrium from below"
            )));
        }
    }
    Ok((lo, hi))
}

/// Builds the equilibrium record at tightness `theta`.
fn derive(params: &ModelParams, theta: f64, residual: f64) -> Equilibrium {
    let ModelParams {
        matching: m,
        prefs,
        endow,
        policy,
    } = params;
    let u = m.u(theta);
    let n = (1.0 - u) * endow.l;
    let y = endow.a * n;
    let v = theta * u * endow.l;
    let wedge = m.recruiting_wedge(theta).unwrap_or(f64::INFINITY);
    let c = y / (1.0 + wedge);
    let shift = prefs.delta - policy.net_return();
    let gamma0 = prefs.mu_wealth / shift;
    let welfare_flow =
        welfare(prefs.sigma, endow.a * ((1.0 - u) * endow.l - m.kappa * v)) + prefs.x0;
    Equilibrium {
        theta,
        y,
        u,
        n,
        v,
        c,
        wedge,
        r: policy.real_rate(),
        gamma0,
        welfare_flow,
        residual,
    }
}

fn welfare(sigma: f64, consumption: f64) -> f64 {
    sigma / (sigma - 1.0) * consumption.powf((sigma - 1.0) / sigma)
}

/// Value of `x'(0)` that places equilibrium unemployment at `target_u`.
///
/// The `mu_wealth` field of `params` is ignored.
pub fn calibrate_demand(target_u: f64, params: &ModelParams) -> Result<f64> {
    if !(target_u > 0.0 && target_u < 1.0) {
        return Err(ModelError::Domain(format!(
            "target unemployment must lie in (0, 1), got {target_u}"
        )));
    }
    let m = &params.matching;
    m.validate()?;
    params.endow.validate()?;
    params.policy.validate()?;
    let prefs = &params.prefs;
    PreferenceParams {
        mu_wealth: 1.0,
        ..*prefs
    }
    .validate()?;
    let shift = demand_shift(prefs, &params.policy)?;

    let theta = m.tightness_for_unemployment(target_u)?;
    let theta_tau = m.theta_tau();
    if !(theta > 0.0 && theta < theta_tau) {
        return Err(ModelError::Domain(format!(
            "target unemployment {target_u} requires tightness {theta} outside (0, {theta_tau})"
        )));
    }
    let wedge = m.recruiting_wedge(theta)?;
    let supply = AsCurve::new(m, &params.endow).output_unchecked(theta, target_u);
    let sigma = prefs.sigma;
    Ok(shift * ((1.0 + wedge).powf(sigma - 1.0) * supply).powf(-1.0 / sigma))
}

/// Keynesian and frictional components of unemployment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Decomposition {
    pub u: f64,
    pub u_keynesian: f64,
    pub u_frictional: f64,
}

pub fn decompose_unemployment(params: &ModelParams) -> Result<Decomposition> {
    let eq = solve(params, DEFAULT_TOL)?;
    let level = params.demand_level()?;
    let u_keynesian = (1.0 - level / params.endow.capacity()).max(0.0);
    Ok(Decomposition {
        u: eq.u,
        u_keynesian,
        u_frictional: eq.u - u_keynesian,
    })
}

/// Flow social welfare at the unemployment and vacancies of `eq`.
pub fn flow_welfare(
    eq: &Equilibrium,
    prefs: &PreferenceParams,
    endow: &EndowmentParams,
    matching: &MatchingParams,
) -> Result<f64> {
    flow_welfare_at(eq.u, eq.v, prefs, endow, matching)
}

/// Flow social welfare as a function of unemployment and vacancies.
pub fn flow_welfare_at(
    u: f64,
    v: f64,
    prefs: &PreferenceParams,
    endow: &EndowmentParams,
    matching: &MatchingParams,
) -> Result<f64> {
    let consumption = endow.a * ((1.0 - u) * endow.l - matching.kappa * v);
    if consumption < 0.0 {
        return Err(ModelError::Domain(format!(
            "recruiting absorbs more than all employment: consumption {consumption}"
        )));
    }
    Ok(welfare(prefs.sigma, consumption) + prefs.x0)
}

/// Consumer surplus from a match: marginal utility of one service minus the
/// value of one unit of real wealth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SurplusCheck {
    pub margin: f64,
    /// Relative error of `c^(-1/sigma) = gamma0 * (1 + tau)`.
    pub euler_residual: f64,
    pub holds: bool,
}

pub fn bilateral_surplus_check(eq: &Equilibrium, prefs: &PreferenceParams) -> SurplusCheck {
    let marginal = eq.c.powf(-1.0 / prefs.sigma);
    let priced = eq.gamma0 * (1.0 + eq.wedge);
    let euler_residual = ((marginal - priced) / priced).abs();
    let margin = marginal - eq.gamma0;
    SurplusCheck {
        margin,
        euler_residual,
        holds: margin > 0.0 && euler_residual <= 1e-10,
    }
}
