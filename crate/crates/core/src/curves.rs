//! Aggregate supply and aggregate demand as functions of tightness.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::error::{ModelError, Result};
use crate::matching::MatchingParams;

/// Preferences over consumption and relative wealth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PreferenceParams {
    /// Curvature of utility from consumption, > 1.
    pub sigma: f64,
    /// Time discount rate per month.
    pub delta: f64,
    /// Marginal utility of relative wealth at zero, `x'(0)`.
    pub mu_wealth: f64,
    /// Utility of zero relative wealth, `x(0)`.
    pub x0: f64,
}

/// Default `x'(0)`: puts equilibrium unemployment at 6% under the default
/// matching, endowment and policy settings.
pub const DEFAULT_MU_WEALTH: f64 = 0.002011620104600386;

impl Default for PreferenceParams {
    fn default() -> Self {
        PreferenceParams {
            sigma: 2.0,
            delta: 0.004,
            mu_wealth: DEFAULT_MU_WEALTH,
            x0: 0.0,
        }
    }
}

impl PreferenceParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.sigma > 1.0 && self.sigma.is_finite()) {
            return Err(ModelError::Config(format!(
                "sigma must exceed 1, got {}",
                self.sigma
            )));
        }
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return Err(ModelError::Config(format!(
                "delta must be positive, got {}",
                self.delta
            )));
        }
        if !(self.mu_wealth > 0.0 && self.mu_wealth.is_finite()) {
            return Err(ModelError::Config(format!(
                "mu_wealth must be positive, got {}",
                self.mu_wealth
            )));
        }
        if !self.x0.is_finite() {
            return Err(ModelError::Config(format!(
                "x0 must be finite, got {}",
                self.x0
            )));
        }
        Ok(())
    }
}

/// Labour productivity and labour-force size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EndowmentParams {
    pub a: f64,
    pub l: f64,
}

impl Default for EndowmentParams {
    fn default() -> Self {
        EndowmentParams { a: 1.0, l: 1.0 }
    }
}

impl EndowmentParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.a > 0.0 && self.a.is_finite()) {
            return Err(ModelError::Config(format!(
                "a must be positive, got {}",
                self.a
            )));
        }
        if !(self.l > 0.0 && self.l.is_finite()) {
            return Err(ModelError::Config(format!(
                "l must be positive, got {}",
                self.l
            )));
        }
        Ok(())
    }

    pub fn capacity(&self) -> f64 {
        self.a * self.l
    }
}

/// Nominal interest rate, inflation norm and wealth tax, all per month.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolicyParams {
    pub i: f64,
    pub pi: f64,
    pub tau_w: f64,
}

impl Default for PolicyParams {
    fn default() -> Self {
        PolicyParams {
            i: 0.004,
            pi: 0.002,
            tau_w: 0.0,
        }
    }
}

impl PolicyParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.i >= 0.0 && self.i.is_finite()) {
            return Err(ModelError::Config(format!(
                "nominal rate i must be non-negative (zero lower bound), got {}",
                self.i
            )));
        }
        if !self.pi.is_finite() {
            return Err(ModelError::Config(format!(
                "pi must be finite, got {}",
                self.pi
            )));
        }
        if !(self.tau_w >= 0.0 && self.tau_w.is_finite()) {
            return Err(ModelError::Config(format!(
                "wealth tax tau_w must be non-negative, got {}",
                self.tau_w
            )));
        }
        Ok(())
    }

    /// `r = i - pi`.
    pub fn real_rate(&self) -> f64 {
        self.i - self.pi
    }

    /// Return on wealth net of the wealth tax, `r - tau_w`.
    pub fn net_return(&self) -> f64 {
        self.real_rate() - self.tau_w
    }

    /// The same policy with the nominal rate at the zero lower bound.
    pub fn at_zlb(&self) -> PolicyParams {
        PolicyParams { i: 0.0, ..*self }
    }
}

/// `delta - (r - tau_w)`, checked positive.
pub fn demand_shift(prefs: &PreferenceParams, policy: &PolicyParams) -> Result<f64> {
    let net_return = policy.net_return();
    let shift = prefs.delta - net_return;
    if shift > 0.0 {
        Ok(shift)
    } else {
        Err(ModelError::NoInteriorSolution {
            delta: prefs.delta,
            net_return,
        })
    }
}

/// The AS curve `y = f / (lambda + f) * a * l`.
#[derive(Debug, Clone, Copy)]
pub struct AsCurve {
    matching: MatchingParams,
    capacity: f64,
}

impl AsCurve {
    pub fn new(matching: &MatchingParams, endow: &EndowmentParams) -> AsCurve {
        AsCurve {
            matching: *matching,
            capacity: endow.capacity(),
        }
    }

    pub fn output(&self, theta: f64) -> Result<f64> {
        let u = self.matching.beveridge_unemployment(theta)?;
        Ok(self.output_unchecked(theta, u))
    }

    pub(crate) fn output_unchecked(&self, theta: f64, u: f64) -> f64 {
        let f = self.matching.f(theta);
        if f.is_infinite() {
            return self.capacity;
        }
        debug_assert!(u >= 0.0);
        f / (self.matching.lambda + f) * self.capacity
    }
}

/// The AD curve `y = [(delta - r + tau_w) / x'(0)]^sigma * (1 + tau(theta))^(1 - sigma)`.
///
/// Construction fails when the net return on wealth is not below the
/// discount rate.
#[derive(Debug, Clone, Copy)]
pub struct AdCurve {
    matching: MatchingParams,
    sigma: f64,
    level: f64,
}

impl AdCurve {
    pub fn new(
        prefs: &PreferenceParams,
        policy: &PolicyParams,
        matching: &MatchingParams,
    ) -> Result<AdCurve> {
        let shift = demand_shift(prefs, policy)?;
        Ok(AdCurve {
            matching: *matching,
            sigma: prefs.sigma,
            level: (shift / prefs.mu_wealth).powf(prefs.sigma),
        })
    }

    /// AD curve with the nominal rate at zero, the outermost position that
    /// monetary policy can reach.
    pub fn zlb(
        prefs: &PreferenceParams,
        policy: &PolicyParams,
        matching: &MatchingParams,
    ) -> Result<AdCurve> {
        AdCurve::new(prefs, &policy.at_zlb(), matching)
    }

    /// Output demanded at zero tightness.
    pub fn level(&self) -> f64 {
        self.level
    }

    pub fn output(&self, theta: f64) -> Result<f64> {
        let wedge = self.matching.recruiting_wedge(theta)?;
        Ok(self.output_with_wedge(wedge))
    }

    pub(crate) fn output_with_wedge(&self, wedge: f64) -> f64 {
        self.level * (1.0 + wedge).powf(1.0 - self.sigma)
    }
}

pub fn as_output(theta: f64, matching: &MatchingParams, endow: &EndowmentParams) -> Result<f64> {
    AsCurve::new(matching, endow).output(theta)
}

pub fn ad_output(
    theta: f64,
    prefs: &PreferenceParams,
    policy: &PolicyParams,
    matching: &MatchingParams,
) -> Result<f64> {
    AdCurve::new(prefs, policy, matching)?.output(theta)
}

pub fn zlb_ad_output(
    theta: f64,
    prefs: &PreferenceParams,
    policy: &PolicyParams,
    matching: &MatchingParams,
) -> Result<f64> {
    AdCurve::zlb(prefs, policy, matching)?.output(theta)
}

/// One sampled row. `None` marks a value undefined at that tightness.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveRow {
    pub theta: f64,
    #[serde(rename = "as")]
    pub as_output: Option<f64>,
    pub ad: Option<f64>,
    pub zlb_ad: Option<f64>,
}

impl CurveRow {
    pub fn is_valid(&self) -> bool {
        self.as_output.is_some() && self.ad.is_some() && self.zlb_ad.is_some()
    }
}

/// Evaluates AS, AD and ZLB-AD on a tightness grid. Points outside
/// `[0, theta_tau)` yield rows with missing values instead of failing.
pub fn sample_curves(
    grid: &[f64],
    matching: &MatchingParams,
    endow: &EndowmentParams,
    prefs: &PreferenceParams,
    policy: &PolicyParams,
) -> Result<Vec<CurveRow>> {
    let supply = AsCurve::new(matching, endow);
    let demand = AdCurve::new(prefs, policy, matching)?;
    let zlb = AdCurve::zlb(prefs, policy, matching)?;
    Ok(grid
        .iter()
        .map(|&theta| CurveRow {
            theta,
            as_output: supply.output(theta).ok(),
            ad: demand.output(theta).ok(),
            zlb_ad: zlb.output(theta).ok(),
        })
        .collect())
}

/// Writes rows as CSV with header `theta,as,ad,zlb_ad`. Missing values are
/// empty fields.
pub fn write_curves_csv<W: Write>(rows: &[CurveRow], mut out: W) -> io::Result<()> {
    writeln!(out, "theta,as,ad,zlb_ad")?;
    for row in rows {
        writeln!(
            out,
            "{},{},{},{}",
            crate::output::num(row.theta),
            crate::output::opt_num(row.as_output),
            crate::output::opt_num(row.ad),
            crate::output::opt_num(row.zlb_ad)
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn setup() -> (
        MatchingParams,
        EndowmentParams,
        PreferenceParams,
        PolicyParams,
    ) {
        (
            MatchingParams::default(),
            EndowmentParams::default(),
            PreferenceParams::default(),
            PolicyParams::default(),
        )
    }

    #[test]
    fn as_limits() {
        let (m, e, _, _) = setup();
        assert_eq!(as_output(0.0, &m, &e).unwrap(), 0.0);
        // f(theta) = lambda
        let theta = (m.lambda / m.mu).powf(1.0 / (1.0 - m.eta));
        assert_relative_eq!(as_output(theta, &m, &e).unwrap(), 0.5, max_relative = 1e-13);
        // f(theta) = 100 lambda
        let theta = (100.0 * m.lambda / m.mu).powf(1.0 / (1.0 - m.eta));
        let y = as_output(theta, &m, &e).unwrap();
        assert!((y - e.capacity()).abs() <= 0.01 * e.capacity());
        assert!(as_output(-1.0, &m, &e).is_err());
    }

    #[test]
    fn as_matches_beveridge() {
        let (m, _, _, _) = setup();
        let e = EndowmentParams { a: 1.7, l: 3.0 };
        for theta in [0.1, 0.5, 1.0, 3.0, 20.0] {
            let u = m.beveridge_unemployment(theta).unwrap();
            assert_relative_eq!(
                as_output(theta, &m, &e).unwrap(),
                e.capacity() * (1.0 - u),
                max_relative = 1e-14
            );
        }
    }

    #[test]
    fn ad_at_zero_tightness() {
        let (m, _, pr, pol) = setup();
        let expected = ((pr.delta - pol.real_rate()) / pr.mu_wealth).powf(pr.sigma);
        assert_eq!(ad_output(0.0, &pr, &pol, &m).unwrap(), expected);

        let pr = PreferenceParams {
            mu_wealth: pr.delta - pol.real_rate(),
            ..pr
        };
        assert_eq!(ad_output(0.0, &pr, &pol, &m).unwrap(), 1.0);
    }

    #[test]
    fn ad_requires_interior_solution() {
        let (m, _, pr, _) = setup();
        let pol = PolicyParams {
            i: 0.01,
            pi: 0.002,
            tau_w: 0.0,
        };
        let err = ad_output(0.0, &pr, &pol, &m).unwrap_err();
        assert!(matches!(err, ModelError::NoInteriorSolution { .. }));
        // wealth tax restores it
        let pol = PolicyParams {
            tau_w: 0.005,
            ..pol
        };
        assert!(ad_output(0.0, &pr, &pol, &m).is_ok());
    }

    #[test]
    fn ad_vanishes_near_pole() {
        let (m, _, pr, pol) = setup();
        let tt = m.theta_tau();
        let y = ad_output(tt * (1.0 - 1e-9), &pr, &pol, &m).unwrap();
        assert!(y < 1e-6 * ad_output(0.0, &pr, &pol, &m).unwrap());
        assert!(ad_output(tt, &pr, &pol, &m).is_err());
    }

    #[test]
    fn rate_cut_and_tax_rise_shift_ad_identically() {
        let (m, _, pr, pol) = setup();
        let d = 0.001;
        let cut = PolicyParams {
            i: pol.i - d,
            ..pol
        };
        let tax = PolicyParams {
            tau_w: pol.tau_w + d,
            ..pol
        };
        for theta in [0.0, 0.3, 1.0, 10.0, 100.0] {
            let a = ad_output(theta, &pr, &cut, &m).unwrap();
            let b = ad_output(theta, &pr, &tax, &m).unwrap();
            assert_relative_eq!(a, b, max_relative = 1e-12);
        }
    }

    #[test]
    fn zlb_examples() {
        let (m, _, _, _) = setup();
        let pr = PreferenceParams {
            sigma: 2.0,
            delta: 0.004,
            mu_wealth: 0.006,
            x0: 0.0,
        };
        let pol = PolicyParams {
            i: 0.003,
            pi: 0.002,
            tau_w: 0.0,
        };
        assert_relative_eq!(
            zlb_ad_output(0.0, &pr, &pol, &m).unwrap(),
            1.0,
            max_relative = 1e-14
        );

        let at_zero = PolicyParams { i: 0.0, ..pol };
        for theta in [0.0, 0.5, 2.0, 50.0] {
            assert_eq!(
                zlb_ad_output(theta, &pr, &at_zero, &m).unwrap(),
                ad_output(theta, &pr, &at_zero, &m).unwrap()
            );
            assert!(
                zlb_ad_output(theta, &pr, &pol, &m).unwrap()
                    > ad_output(theta, &pr, &pol, &m).unwrap()
            );
        }
    }

    #[test]
    fn ad_scale_invariance() {
        let (m, _, pr, pol) = setup();
        let shift = pr.delta - pol.real_rate();
        let scaled = PreferenceParams {
            delta: pol.real_rate() + 3.0 * shift,
            mu_wealth: 3.0 * pr.mu_wealth,
            ..pr
        };
        for theta in [0.0, 0.7, 5.0] {
            assert_relative_eq!(
                ad_output(theta, &pr, &pol, &m).unwrap(),
                ad_output(theta, &scaled, &pol, &m).unwrap(),
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn sampling_edge_cases() {
        let (m, e, pr, pol) = setup();
        assert!(sample_curves(&[], &m, &e, &pr, &pol).unwrap().is_empty());

        let rows = sample_curves(&[0.0], &m, &e, &pr, &pol).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].as_output, Some(0.0));
        assert_eq!(rows[0].ad, Some(ad_output(0.0, &pr, &pol, &m).unwrap()));
        assert_eq!(
            rows[0].zlb_ad,
            Some(zlb_ad_output(0.0, &pr, &pol, &m).unwrap())
        );

        let rows = sample_curves(&[-1.0, m.theta_tau() * 2.0], &m, &e, &pr, &pol).unwrap();
        assert!(rows.iter().all(|r| !r.is_valid()));
        assert!(rows[1].as_output.is_some());
    }

    #[test]
    fn sampled_columns_monotone() {
        let (m, e, pr, pol) = setup();
        let hi = m.theta_tau() * (1.0 - 1e-9);
        let grid: Vec<f64> = (0..1000).map(|k| hi * k as f64 / 999.0).collect();
        let rows = sample_curves(&grid, &m, &e, &pr, &pol).unwrap();
        assert!(rows.iter().all(CurveRow::is_valid));
        for w in rows.windows(2) {
            assert!(w[1].as_output.unwrap() >= w[0].as_output.unwrap());
            assert!(w[1].ad.unwrap() <= w[0].ad.unwrap());
            assert!(w[1].zlb_ad.unwrap() >= w[1].ad.unwrap());
        }
    }

    #[test]
    fn csv_layout() {
        let (m, e, pr, pol) = setup();
        let rows = sample_curves(&[0.0, 1.0, -1.0], &m, &e, &pr, &pol).unwrap();
        let mut buf = Vec::new();
        write_curves_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "theta,as,ad,zlb_ad");
        assert_eq!(lines.len(), 4);
        assert!(lines[1].starts_with("0.0,0.0,"));
        assert_eq!(lines[3], "-1.0,,,");
    }

    #[test]
    fn supply_scales_with_capacity_only() {
        let (m, e, _, _) = setup();
        let doubled = EndowmentParams { a: 2.0 * e.a, ..e };
        for theta in [0.2, 1.0, 4.0] {
            assert_relative_eq!(
                as_output(theta, &m, &doubled).unwrap(),
                2.0 * as_output(theta, &m, &e).unwrap(),
                max_relative = 1e-15
            );
        }
    }
}
