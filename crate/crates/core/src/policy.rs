//! Policy multipliers and optimal monetary and wealth-tax policy.
//!
//! Multipliers are in percentage points of unemployment per percentage
//! point of the instrument, which for rates expressed as fractions is the
//! plain derivative.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::efficiency::efficiency_report;
use crate::equilibrium::{solve, ModelParams, DEFAULT_TOL};
use crate::error::{ModelError, Result};
use crate::roots::{bisect, Bisection};

/// Finite-difference step for multipliers as a fraction of the demand
/// shift `delta - r + tau_w`, the scale on which `u(i)` bends.
pub const RELATIVE_STEP: f64 = 1e-4;
/// Relative agreement required between step `h` and `h / 2` estimates.
pub const RICHARDSON_RTOL: f64 = 1e-6;
/// Distance kept below the rate at which `r - tau_w` would reach `delta`.
const RATE_CEILING_MARGIN: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Instrument {
    NominalRate,
    WealthTax,
}

impl fmt::Display for Instrument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Instrument::NominalRate => "nominal_rate",
            Instrument::WealthTax => "wealth_tax",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolicyPrescription {
    pub instrument: Instrument,
    pub current_value: f64,
    pub optimal_value: f64,
    /// Recommended move before any lower-bound clipping
    /// (negative for a cut).
    pub change: f64,
    pub gap_before: f64,
    pub gap_after_predicted: f64,
    pub multiplier_used: f64,
    pub zlb_binding: bool,
}

impl PolicyPrescription {
    pub fn unconstrained_value(&self) -> f64 {
        self.current_value + self.change
    }

    /// One-line human-readable summary.
    pub fn summary(&self) -> String {
        let verb = match (self.instrument, self.change < 0.0) {
            (Instrument::NominalRate, true) => "cut",
            (Instrument::NominalRate, false) => "raise",
            (Instrument::WealthTax, true) => "lower",
            (Instrument::WealthTax, false) => "raise",
        };
        let mut line = format!(
            "{}: gap {:.4} pp, multiplier {:.4}: {} by {:.4} pp, from {:.6} to {:.6}; predicted gap after {:.4} pp",
            self.instrument,
            100.0 * self.gap_before,
            self.multiplier_used,
            verb,
            100.0 * self.change.abs(),
            self.current_value,
            self.optimal_value,
            100.0 * self.gap_after_predicted,
        );
        if self.zlb_binding {
            line.push_str(" (zero lower bound binds)");
        }
        line
    }
}

/// Finite-difference estimate of a multiplier.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Multiplier {
    pub value: f64,
    pub step: f64,
    /// A bound on the instrument forced a one-sided difference.
    pub one_sided: bool,
    /// Relative difference between the step `h` and `h / 2` estimates.
    pub richardson_diff: f64,
}

impl Multiplier {
    pub fn richardson_ok(&self) -> bool {
        self.richardson_diff <= RICHARDSON_RTOL
    }
}

/// Default multiplier step for `params`, per month.
pub fn default_step(params: &ModelParams) -> f64 {
    RELATIVE_STEP * (params.prefs.delta - params.policy.net_return()).abs()
}

fn unemployment(params: &ModelParams) -> Result<f64> {
    Ok(solve(params, DEFAULT_TOL)?.u)
}

/// Derivative of `g` at `x` restricted to `[lower, upper)`.
fn derivative<G>(g: &G, x: f64, h: f64, lower: f64, upper: f64) -> Result<(f64, bool)>
where
    G: Fn(f64) -> Result<f64>,
{
    if x - h >= lower && x + h < upper {
        Ok(((g(x + h)? - g(x - h)?) / (2.0 * h), false))
    } else if x + h < upper {
        Ok(((g(x + h)? - g(x)?) / h, true))
    } else if x - h >= lower {
        Ok(((g(x)? - g(x - h)?) / h, true))
    } else {
        Err(ModelError::Domain(format!(
            "step {h} does not fit between bounds {lower} and {upper}"
        )))
    }
}

fn multiplier<G>(g: G, x: f64, h: f64, lower: f64, upper: f64, sign: f64) -> Result<Multiplier>
where
    G: Fn(f64) -> Result<f64>,
{
    if !(h > 0.0) {
        return Err(ModelError::Domain(format!(
            "step must be positive, got {h}"
        )));
    }
    let (coarse, one_sided) = derivative(&g, x, h, lower, upper)?;
    let (fine, _) = derivative(&g, x, 0.5 * h, lower, upper)?;
    Ok(Multiplier {
        value: sign * coarse,
        step: h,
        one_sided,
        richardson_diff: ((coarse - fine) / fine).abs(),
    })
}

/// Monetary multiplier `du/di`.
pub fn monetary_multiplier(params: &ModelParams, h: f64) -> Result<Multiplier> {
    params.validate()?;
    let ceiling = rate_ceiling(params);
    multiplier(
        |i| unemployment(&params.with_nominal_rate(i)),
        params.policy.i,
        h,
        0.0,
        ceiling,
        1.0,
    )
}

/// Tax multiplier `-du/dtau_w`.
pub fn tax_multiplier(params: &ModelParams, h: f64) -> Result<Multiplier> {
    params.validate()?;
    multiplier(
        |tau| unemployment(&params.with_wealth_tax(tau)),
        params.policy.tau_w,
        h,
        0.0,
        f64::INFINITY,
        -1.0,
    )
}

/// Nominal rate at which `r - tau_w` reaches `delta`.
fn rate_ceiling(params: &ModelParams) -> f64 {
    params.prefs.delta + params.policy.pi + params.policy.tau_w
}

/// Solves `u(i*) = u*` over `i` in `[0, i_max]`, stopping at the zero lower
/// bound when even `i = 0` leaves unemployment above its efficient level.
pub fn optimal_rate_exact(params: &ModelParams) -> Result<PolicyPrescription> {
    let report = efficiency_report(params)?;
    let u_star = report.u_star;
    let current = params.policy.i;
    let mult = monetary_multiplier(params, default_step(params))
        .map(|m| m.value)
        .unwrap_or(f64::NAN);
    let u_of = |i: f64| unemployment(&params.with_nominal_rate(i));

    let u_zlb = u_of(0.0)?;
    if u_zlb > u_star {
        let slope = multiplier(
            u_of,
            0.0,
            default_step(&params.with_nominal_rate(0.0)),
            0.0,
            rate_ceiling(params),
            1.0,
        )?
        .value;
        return Ok(PolicyPrescription {
            instrument: Instrument::NominalRate,
            current_value: current,
            optimal_value: 0.0,
            change: -(u_zlb - u_star) / slope - current,
            gap_before: report.gap,
            gap_after_predicted: u_zlb - u_star,
            multiplier_used: mult,
            zlb_binding: true,
        });
    }

    let i_max = rate_ceiling(params) - RATE_CEILING_MARGIN;
    let failure = std::cell::Cell::new(None);
    let root = bisect(
        |i| match u_of(i) {
            Ok(u) => u - u_star,
            Err(e) => {
                failure.set(Some(e));
                f64::NAN
            }
        },
        0.0,
        i_max,
        Bisection {
            rtol: 1e-13,
            max_iter: 200,
        },
    );
    if let Some(e) = failure.take() {
        return Err(e);
    }
    let i_star = root?.x;
    Ok(PolicyPrescription {
        instrument: Instrument::NominalRate,
        current_value: current,
        optimal_value: i_star,
        change: i_star - current,
        gap_before: report.gap,
        gap_after_predicted: u_of(i_star)? - u_star,
        multiplier_used: mult,
        zlb_binding: false,
    })
}

/// First-order optimal nominal rate, `i* = i - gap / multiplier`, clipped at
/// zero.
pub fn optimal_rate_sufficient_statistic(
    gap: f64,
    multiplier: f64,
    i_current: f64,
) -> Result<PolicyPrescription> {
    if !(multiplier > 0.0 && multiplier.is_finite()) {
        return Err(ModelError::Domain(format!(
            "monetary multiplier must be positive, got {multiplier}"
        )));
    }
    let change = -gap / multiplier;
    let unconstrained = i_current + change;
    let optimal_value = unconstrained.max(0.0);
    Ok(PolicyPrescription {
        instrument: Instrument::NominalRate,
        current_value: i_current,
        optimal_value,
        change,
        gap_before: gap,
        gap_after_predicted: if unconstrained < 0.0 {
            gap - multiplier * (i_current - optimal_value)
        } else {
            0.0
        },
        multiplier_used: multiplier,
        zlb_binding: unconstrained < 0.0,
    })
}

/// First-order optimal wealth tax, `tau* = tau + gap / tax_multiplier`.
/// The wealth tax has no lower bound to respect.
pub fn optimal_wealth_tax(
    gap: f64,
    tax_multiplier: f64,
    tau_current: f64,
) -> Result<PolicyPrescription> {
    if !(tax_multiplier > 0.0 && tax_multiplier.is_finite()) {
        return Err(ModelError::Domain(format!(
            "tax multiplier must be positive, got {tax_multiplier}"
        )));
    }
    let change = gap / tax_multiplier;
    Ok(PolicyPrescription {
        instrument: Instrument::WealthTax,
        current_value: tau_current,
        optimal_value: tau_current + change,
        change,
        gap_before: gap,
        gap_after_predicted: 0.0,
        multiplier_used: tax_multiplier,
        zlb_binding: false,
    })
}

/// Sufficient-statistic prescription using the model's own gap and
/// monetary multiplier.
pub fn optimal_rate_model(params: &ModelParams) -> Result<PolicyPrescription> {
    let report = efficiency_report(params)?;
    let mult = monetary_multiplier(params, default_step(params))?;
    optimal_rate_sufficient_statistic(report.gap, mult.value, params.policy.i)
}

/// Sufficient-statistic wealth tax using the model's own gap and tax
/// multiplier.
pub fn optimal_wealth_tax_model(params: &ModelParams) -> Result<PolicyPrescription> {
    let report = efficiency_report(params)?;
    let mult = tax_multiplier(params, default_step(params))?;
    optimal_wealth_tax(report.gap, mult.value, params.policy.tau_w)
}

/// Solves `u(tau_w*) = u*` holding the nominal rate fixed. The tax is kept
/// non-negative; if unemployment is already below its efficient level at
/// zero tax, zero is returned with the remaining (negative) gap.
pub fn optimal_wealth_tax_exact(params: &ModelParams) -> Result<PolicyPrescription> {
    let report = efficiency_report(params)?;
    let u_star = report.u_star;
    let current = params.policy.tau_w;
    let mult = tax_multiplier(params, default_step(params))
        .map(|m| m.value)
        .unwrap_or(f64::NAN);
    let u_of = |tau: f64| unemployment(&params.with_wealth_tax(tau));

    // smallest admissible tax keeps delta - r + tau_w positive
    let lo = (params.policy.real_rate() - params.prefs.delta + RATE_CEILING_MARGIN).max(0.0);
    let u_lo = u_of(lo)?;
    if u_lo <= u_star {
        return Ok(PolicyPrescription {
            instrument: Instrument::WealthTax,
            current_value: current,
            optimal_value: lo,
            change: lo - current,
            gap_before: report.gap,
            gap_after_predicted: u_lo - u_star,
            multiplier_used: mult,
            zlb_binding: false,
        });
    }
    let mut hi = lo.max(current) + 1e-3;
    while u_of(hi)? > u_star {
        hi *= 2.0;
        if hi > 1e3 {
            return Err(ModelError::Numerical(
                "no wealth tax below 1000 per month reaches efficient unemployment".into(),
            ));
        }
    }
    let failure = std::cell::Cell::new(None);
    let root = bisect(
        |tau| match u_of(tau) {
            Ok(u) => u - u_star,
            Err(e) => {
                failure.set(Some(e));
                f64::NAN
            }
        },
        lo,
        hi,
        Bisection {
            rtol: 1e-13,
            max_iter: 200,
        },
    );
    if let Some(e) = failure.take() {
        return Err(e);
    }
    let tau_star = root?.x;
    Ok(PolicyPrescription {
        instrument: Instrument::WealthTax,
        current_value: current,
        optimal_value: tau_star,
        change: tau_star - current,
        gap_before: report.gap,
        gap_after_predicted: u_of(tau_star)? - u_star,
        multiplier_used: mult,
        zlb_binding: false,
    })
}
