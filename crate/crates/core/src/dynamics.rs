//! Out-of-equilibrium dynamics: unemployment adjustment towards the
//! Beveridge curve, the costate phase line, and the household wealth path.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::curves::{demand_shift, PolicyParams, PreferenceParams};
use crate::equilibrium::Equilibrium;
use crate::error::{ModelError, Result};
use crate::matching::MatchingParams;
use crate::ode::integrate;

/// Default integration step, in months.
pub const DEFAULT_DT: f64 = 0.01;
/// Divergence threshold for the costate, relative to its critical point.
pub const DIVERGENCE_FACTOR: f64 = 1e9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateLabel {
    U,
    Gamma,
    W,
    P,
    B,
}

impl StateLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            StateLabel::U => "u",
            StateLabel::Gamma => "gamma",
            StateLabel::W => "w",
            StateLabel::P => "p",
            StateLabel::B => "b",
        }
    }
}

/// A sampled trajectory. Sample times are strictly increasing and every
/// value is finite; a path cut short by divergence has `truncated` set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimePath {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub state_label: StateLabel,
    pub truncated: bool,
}

impl TimePath {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> Option<(f64, f64)> {
        Some((*self.times.last()?, *self.values.last()?))
    }

    /// Linear interpolation between samples; `None` outside the sampled span.
    pub fn value_at(&self, t: f64) -> Option<f64> {
        let k = self.times.partition_point(|&s| s < t);
        if k == self.times.len() {
            return None;
        }
        if self.times[k] == t {
            return Some(self.values[k]);
        }
        if k == 0 {
            return None;
        }
        let (t0, t1) = (self.times[k - 1], self.times[k]);
        let w = (t - t0) / (t1 - t0);
        Some(self.values[k - 1] + w * (self.values[k] - self.values[k - 1]))
    }

    /// Writes the path as CSV with header `t,value`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "t,value")?;
        for (t, x) in self.times.iter().zip(&self.values) {
            writeln!(out, "{},{}", crate::output::num(*t), crate::output::num(*x))?;
        }
        Ok(())
    }
}

fn check_step(horizon: f64, dt: f64) -> Result<()> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(ModelError::Domain(format!("dt must be positive, got {dt}")));
    }
    if !(horizon >= 0.0 && horizon.is_finite()) {
        return Err(ModelError::Domain(format!(
            "horizon must be non-negative, got {horizon}"
        )));
    }
    Ok(())
}

/// Integrates `u' = lambda (1 - u) - f(theta) u` at fixed tightness.
pub fn integrate_unemployment(
    u0: f64,
    theta: f64,
    m: &MatchingParams,
    horizon: f64,
    dt: f64,
) -> Result<TimePath> {
    if !(u0 > 0.0 && u0 < 1.0) {
        return Err(ModelError::Domain(format!(
            "initial unemployment must lie in (0, 1), got {u0}"
        )));
    }
    check_step(horizon, dt)?;
    let f = m.job_finding_rate(theta)?;
    let rate = m.lambda + f;
    if dt * rate > 0.5 {
        return Err(ModelError::StepSize { dt, rate });
    }
    let lambda = m.lambda;
    let traj = integrate(
        move |_, u| lambda * (1.0 - u) - f * u,
        u0,
        horizon,
        dt,
        |_| false,
    );
    Ok(TimePath {
        times: traj.times,
        values: traj.values,
        state_label: StateLabel::U,
        truncated: traj.stopped_early,
    })
}

/// Exponential decay rate of `|x(t) - target|`, from a least-squares fit of
/// its logarithm against time.
pub fn fit_decay_rate(path: &TimePath, target: f64) -> Result<f64> {
    let points: Vec<(f64, f64)> = path
        .times
        .iter()
        .zip(&path.values)
        .filter_map(|(&t, &x)| {
            let d = (x - target).abs();
            (d > 0.0).then(|| (t, d.ln()))
        })
        .collect();
    if points.len() < 2 {
        return Err(ModelError::Domain(
            "need at least two samples away from the target to fit a decay rate".into(),
        ));
    }
    let n = points.len() as f64;
    let t_mean = points.iter().map(|p| p.0).sum::<f64>() / n;
    let y_mean = points.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (t, y) in &points {
        sxy += (t - t_mean) * (y - y_mean);
        sxx += (t - t_mean) * (t - t_mean);
    }
    Ok(-sxy / sxx)
}

/// Stability type of the critical point of a scalar linear ODE.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stability {
    Source,
    Sink,
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Divergence {
    PositiveInfinity,
    NegativeInfinity,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CostatePath {
    pub path: TimePath,
    pub critical_point: f64,
    pub stability: Stability,
    pub divergence: Option<Divergence>,
}

/// Integrates `gamma' = (delta - r + tau_w) gamma - x'(0)` from
/// `gamma_init`. The path is cut once `|gamma|` exceeds
/// `DIVERGENCE_FACTOR` times the critical point.
pub fn costate_phase_line(
    gamma_init: f64,
    prefs: &PreferenceParams,
    policy: &PolicyParams,
    horizon: f64,
    dt: f64,
) -> Result<CostatePath> {
    check_step(horizon, dt)?;
    let shift = demand_shift(prefs, policy)?;
    let pull = prefs.mu_wealth;
    let critical_point = pull / shift;
    let bound = DIVERGENCE_FACTOR * critical_point.abs();
    let traj = integrate(
        move |_, g| shift * g - pull,
        gamma_init,
        horizon,
        dt,
        move |g| g.abs() > bound,
    );
    let divergence = if traj.stopped_early {
        if gamma_init > critical_point {
            Some(Divergence::PositiveInfinity)
        } else {
            Some(Divergence::NegativeInfinity)
        }
    } else {
        None
    };
    Ok(CostatePath {
        path: TimePath {
            times: traj.times,
            values: traj.values,
            state_label: StateLabel::Gamma,
            truncated: traj.stopped_early,
        },
        critical_point,
        stability: classify(shift),
        divergence,
    })
}

/// Classifies the critical point of `x' = slope * x + const`.
pub fn classify(slope: f64) -> Stability {
    if slope > 0.0 {
        Stability::Source
    } else if slope < 0.0 {
        Stability::Sink
    } else {
        Stability::Degenerate
    }
}

/// How the lump-sum tax is set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FiscalRule {
    /// Real tax `(r - tau_w) * w0`: collects the interest on constant real
    /// debt net of the rebated wealth-tax revenue, so real wealth stays put.
    BalanceDebt,
    /// Real tax `T / p` interpolated linearly between `(times, real_tax)`
    /// knots and held constant outside them.
    ExplicitPath { times: Vec<f64>, real_tax: Vec<f64> },
}

impl FiscalRule {
    pub fn constant(real_tax: f64) -> FiscalRule {
        FiscalRule::ExplicitPath {
            times: vec![0.0],
            real_tax: vec![real_tax],
        }
    }

    fn validate(&self) -> Result<()> {
        if let FiscalRule::ExplicitPath { times, real_tax } = self {
            if times.is_empty() || times.len() != real_tax.len() {
                return Err(ModelError::Config(
                    "explicit tax path needs matching, non-empty time and tax knots".into(),
                ));
            }
            if times.windows(2).any(|w| !(w[1] > w[0])) {
                return Err(ModelError::Config("tax path times must increase".into()));
            }
        }
        Ok(())
    }

    fn real_tax(&self, t: f64, net_return: f64, w0: f64) -> f64 {
        match self {
            FiscalRule::BalanceDebt => net_return * w0,
            FiscalRule::ExplicitPath { times, real_tax } => {
                let k = times.partition_point(|&s| s <= t);
                if k == 0 {
                    real_tax[0]
                } else if k == times.len() {
                    real_tax[k - 1]
                } else {
                    let w = (t - times[k - 1]) / (times[k] - times[k - 1]);
                    real_tax[k - 1] + w * (real_tax[k] - real_tax[k - 1])
                }
            }
        }
    }
}

/// Real wealth together with the price level and nominal bonds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WealthPaths {
    pub wealth: TimePath,
    pub price: TimePath,
    pub bonds: TimePath,
}

/// Integrates `w' = (r - tau_w) w + (1 - u) a l - (1 + tau) c - T / p` with
/// the equilibrium allocation held fixed. Prices follow `p(t) = e^(pi t)`
/// and bonds are `b = p w`.
pub fn wealth_path(
    w0: f64,
    eq: &Equilibrium,
    fiscal: &FiscalRule,
    policy: &PolicyParams,
    horizon: f64,
    dt: f64,
) -> Result<WealthPaths> {
    check_step(horizon, dt)?;
    fiscal.validate()?;
    if !w0.is_finite() {
        return Err(ModelError::Domain(format!(
            "initial wealth must be finite, got {w0}"
        )));
    }
    let net_return = policy.net_return();
    let income = eq.y;
    let spending = (1.0 + eq.wedge) * eq.c;
    let rhs =
        |t: f64, w: f64| net_return * w + income - spending - fiscal.real_tax(t, net_return, w0);
    let traj = integrate(rhs, w0, horizon, dt, |_| false);

    let pi = policy.pi;
    let prices: Vec<f64> = traj.times.iter().map(|t| (pi * t).exp()).collect();
    let bonds: Vec<f64> = prices
        .iter()
        .zip(&traj.values)
        .map(|(p, w)| p * w)
        .collect();
    let truncated = traj.stopped_early;
    Ok(WealthPaths {
        wealth: TimePath {
            times: traj.times.clone(),
            values: traj.values,
            state_label: StateLabel::W,
            truncated,
        },
        price: TimePath {
            times: traj.times.clone(),
            values: prices,
            state_label: StateLabel::P,
            truncated,
        },
        bonds: TimePath {
            times: traj.times,
            values: bonds,
            state_label: StateLabel::B,
            truncated,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibrium::{solve, ModelParams, DEFAULT_TOL};
    use approx::assert_relative_eq;

    fn matching_with_rate(total: f64) -> (MatchingParams, f64) {
        let m = MatchingParams::default();
        let f = total - m.lambda;
        let theta = (f / m.mu).powf(1.0 / (1.0 - m.eta));
        (m, theta)
    }

    #[test]
    fn unemployment_at_rest_on_beveridge() {
        let (m, theta) = matching_with_rate(0.62);
        let u_bev = m.beveridge_unemployment(theta).unwrap();
        let path = integrate_unemployment(u_bev, theta, &m, 24.0, DEFAULT_DT).unwrap();
        assert!(path.values.iter().all(|u| (u - u_bev).abs() < 1e-15));
    }

    #[test]
    fn unemployment_decays_at_total_rate() {
        let (m, theta) = matching_with_rate(0.62);
        let u_bev = m.beveridge_unemployment(theta).unwrap();
        let u0 = 0.10;
        let path = integrate_unemployment(u0, theta, &m, 12.0, DEFAULT_DT).unwrap();
        for (t, u) in path.times.iter().zip(&path.values) {
            let exact = u_bev + (u0 - u_bev) * (-0.62 * t).exp();
            assert!((u - exact).abs() < 1e-11);
        }
        assert_relative_eq!(
            fit_decay_rate(&path, u_bev).unwrap(),
            0.62,
            max_relative = 1e-6
        );
        // monotone approach from above
        assert!(path.values.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn unemployment_step_size_guard() {
        let (m, theta) = matching_with_rate(0.62);
        assert!(matches!(
            integrate_unemployment(0.1, theta, &m, 12.0, 1.0),
            Err(ModelError::StepSize { .. })
        ));
        assert!(integrate_unemployment(0.0, theta, &m, 12.0, 0.01).is_err());
        assert!(integrate_unemployment(0.1, theta, &m, 12.0, 0.0).is_err());
    }

    #[test]
    fn integrator_is_fourth_order_on_unemployment() {
        let (m, theta) = matching_with_rate(0.62);
        let u_bev = m.beveridge_unemployment(theta).unwrap();
        let max_err = |dt: f64| {
            let path = integrate_unemployment(0.2, theta, &m, 10.0, dt).unwrap();
            path.times
                .iter()
                .zip(&path.values)
                .map(|(t, u)| (u - (u_bev + (0.2 - u_bev) * (-0.62 * t).exp())).abs())
                .fold(0.0, f64::max)
        };
        assert!(max_err(0.5) / max_err(0.25) >= 8.0);
        assert!(max_err(0.25) / max_err(0.125) >= 8.0);
    }

    #[test]
    fn costate_critical_point() {
        let prefs = PreferenceParams {
            delta: 0.004,
            mu_wealth: 0.002,
            ..Default::default()
        };
        let policy = PolicyParams {
            i: 0.004,
            pi: 0.002,
            tau_w: 0.0,
        };
        let out = costate_phase_line(1.0, &prefs, &policy, 120.0, DEFAULT_DT).unwrap();
        assert_relative_eq!(out.critical_point, 1.0, max_relative = 1e-15);
        assert_eq!(out.stability, Stability::Source);
        assert!(out.divergence.is_none());
        assert!(out.path.values.iter().all(|g| (g - 1.0).abs() < 1e-12));
    }

    #[test]
    fn costate_diverges_off_critical_point() {
        let prefs = PreferenceParams {
            delta: 0.05,
            mu_wealth: 0.01,
            ..Default::default()
        };
        let policy = PolicyParams {
            i: 0.004,
            pi: 0.002,
            tau_w: 0.0,
        };
        let g0 = costate_phase_line(0.0, &prefs, &policy, 0.0, 1.0)
            .unwrap()
            .critical_point;
        let up = costate_phase_line(1.01 * g0, &prefs, &policy, 2000.0, 0.1).unwrap();
        assert_eq!(up.divergence, Some(Divergence::PositiveInfinity));
        assert!(up.path.truncated);
        assert!(up.path.values.iter().all(|g| g.is_finite()));
        let down = costate_phase_line(0.99 * g0, &prefs, &policy, 2000.0, 0.1).unwrap();
        assert_eq!(down.divergence, Some(Divergence::NegativeInfinity));
        assert!(down.path.values.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn classification() {
        assert_eq!(classify(0.1), Stability::Source);
        assert_eq!(classify(-0.1), Stability::Sink);
        assert_eq!(classify(0.0), Stability::Degenerate);
    }

    #[test]
    fn costate_requires_interior_solution() {
        let prefs = PreferenceParams {
            delta: 0.001,
            ..Default::default()
        };
        let policy = PolicyParams {
            i: 0.004,
            pi: 0.002,
            tau_w: 0.0,
        };
        assert!(costate_phase_line(1.0, &prefs, &policy, 10.0, 0.1).is_err());
    }

    #[test]
    fn wealth_balanced_budget_is_flat() {
        let params = ModelParams::default();
        let eq = solve(&params, DEFAULT_TOL).unwrap();
        let paths = wealth_path(
            3.0,
            &eq,
            &FiscalRule::BalanceDebt,
            &params.policy,
            120.0,
            0.1,
        )
        .unwrap();
        assert!(paths.wealth.values.iter().all(|w| (w - 3.0).abs() < 1e-12));
    }

    #[test]
    fn wealth_grows_at_net_return_without_taxes() {
        let params = ModelParams::default().with_wealth_tax(0.0005);
        let eq = solve(&params, DEFAULT_TOL).unwrap();
        let g = params.policy.net_return();
        assert!(g > 0.0);
        let paths = wealth_path(
            2.0,
            &eq,
            &FiscalRule::constant(0.0),
            &params.policy,
            600.0,
            0.5,
        )
        .unwrap();
        for (t, w) in paths.wealth.times.iter().zip(&paths.wealth.values) {
            assert_relative_eq!(*w, 2.0 * (g * t).exp(), max_relative = 1e-10);
        }
    }

    #[test]
    fn bonds_equal_wealth_without_inflation() {
        let mut params = ModelParams::default();
        params.policy.pi = 0.0;
        params.policy.i = 0.002;
        let eq = solve(&params, DEFAULT_TOL).unwrap();
        let paths = wealth_path(
            1.0,
            &eq,
            &FiscalRule::constant(0.001),
            &params.policy,
            24.0,
            0.1,
        )
        .unwrap();
        assert_eq!(paths.bonds.values, paths.wealth.values);
        assert!(paths.price.values.iter().all(|&p| p == 1.0));
    }

    #[test]
    fn nominal_budget_identity() {
        let params = ModelParams::default();
        let eq = solve(&params, DEFAULT_TOL).unwrap();
        let fiscal = FiscalRule::ExplicitPath {
            times: vec![0.0, 60.0],
            real_tax: vec![0.0, 0.01],
        };
        let dt = 0.01;
        let paths = wealth_path(1.0, &eq, &fiscal, &params.policy, 60.0, dt).unwrap();
        let pol = params.policy;
        let (b, p, w, t) = (
            &paths.bonds.values,
            &paths.price.values,
            &paths.wealth.values,
            &paths.wealth.times,
        );
        for k in (1..t.len() - 1).step_by(250) {
            let b_dot = (b[k + 1] - b[k - 1]) / (t[k + 1] - t[k - 1]);
            let lhs = b_dot / p[k] - pol.pi * w[k];
            let tax = fiscal.real_tax(t[k], pol.net_return(), 1.0);
            let rhs = pol.net_return() * w[k] + eq.y - (1.0 + eq.wedge) * eq.c - tax;
            assert!((lhs - rhs).abs() < 1e-8, "t = {}: {lhs} vs {rhs}", t[k]);
        }
    }

    #[test]
    fn explicit_path_validation() {
        let params = ModelParams::default();
        let eq = solve(&params, DEFAULT_TOL).unwrap();
        let bad = FiscalRule::ExplicitPath {
            times: vec![1.0, 0.0],
            real_tax: vec![0.0, 0.0],
        };
        assert!(wealth_path(1.0, &eq, &bad, &params.policy, 1.0, 0.1).is_err());
        let bad = FiscalRule::ExplicitPath {
            times: vec![],
            real_tax: vec![],
        };
        assert!(wealth_path(1.0, &eq, &bad, &params.policy, 1.0, 0.1).is_err());
    }

    #[test]
    fn path_csv_and_interpolation() {
        let path = TimePath {
            times: vec![0.0, 0.5, 1.0],
            values: vec![1.0, 2.0, 4.0],
            state_label: StateLabel::W,
            truncated: false,
        };
        assert_eq!(path.value_at(0.25), Some(1.5));
        assert_eq!(path.value_at(1.0), Some(4.0));
        assert_eq!(path.value_at(1.5), None);
        let mut buf = Vec::new();
        path.write_csv(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "t,value\n0.0,1.0\n0.5,2.0\n1.0,4.0\n"
        );
    }
}
