//! Comparative statics of business-cycle and policy shocks.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::efficiency::efficient_unemployment;
use crate::equilibrium::{solve, Equilibrium, ModelParams, DEFAULT_TOL};
use crate::error::{ModelError, Result};
use crate::output::num;

/// Changes smaller than this in absolute value count as zero.
pub const SIGN_DEAD_ZONE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShockTarget {
    Delta,
    MuWealth,
    A,
    L,
    I,
    TauW,
}

impl ShockTarget {
    pub const ALL: [ShockTarget; 6] = [
        ShockTarget::Delta,
        ShockTarget::MuWealth,
        ShockTarget::A,
        ShockTarget::L,
        ShockTarget::I,
        ShockTarget::TauW,
    ];

    pub fn key(&self) -> &'static str {
        match self {
            ShockTarget::Delta => "delta",
            ShockTarget::MuWealth => "mu_wealth",
            ShockTarget::A => "a",
            ShockTarget::L => "l",
            ShockTarget::I => "i",
            ShockTarget::TauW => "tau_w",
        }
    }

    /// Relative shocks scale the parameter; absolute shocks add to it.
    pub fn is_relative(&self) -> bool {
        !matches!(self, ShockTarget::I | ShockTarget::TauW)
    }

    fn describe(&self) -> &'static str {
        match self {
            ShockTarget::Delta => "discount rate",
            ShockTarget::MuWealth => "marginal utility of wealth",
            ShockTarget::A => "labour productivity",
            ShockTarget::L => "labour-force size",
            ShockTarget::I => "nominal interest rate",
            ShockTarget::TauW => "wealth tax rate",
        }
    }

    pub fn group(&self) -> &'static str {
        match self {
            ShockTarget::Delta | ShockTarget::MuWealth => "aggregate_demand",
            ShockTarget::A | ShockTarget::L => "aggregate_supply",
            ShockTarget::I | ShockTarget::TauW => "policy",
        }
    }
}

impl FromStr for ShockTarget {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self> {
        ShockTarget::ALL
            .into_iter()
            .find(|t| t.key() == s)
            .ok_or_else(|| ModelError::Config(format!("unknown shock target `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Increase,
    Decrease,
}

impl Direction {
    fn sign(&self) -> f64 {
        match self {
            Direction::Increase => 1.0,
            Direction::Decrease => -1.0,
        }
    }
}

/// A permanent parameter change. `magnitude` is a fraction of the current
/// value for relative targets and a rate per month for absolute ones.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Shock {
    pub target: ShockTarget,
    pub direction: Direction,
    pub magnitude: f64,
}

impl Shock {
    pub fn new(target: ShockTarget, direction: Direction, magnitude: f64) -> Shock {
        Shock {
            target,
            direction,
            magnitude,
        }
    }

    pub fn label(&self) -> String {
        let verb = match self.direction {
            Direction::Increase => "Increase",
            Direction::Decrease => "Decrease",
        };
        format!("{verb} in {}", self.target.describe())
    }

    /// Parameters after the shock.
    pub fn apply(&self, params: &ModelParams) -> Result<ModelParams> {
        if !(self.magnitude >= 0.0 && self.magnitude.is_finite()) {
            return Err(ModelError::Config(format!(
                "shock magnitude must be non-negative, got {}",
                self.magnitude
            )));
        }
        let mut p = *params;
        let field = match self.target {
            ShockTarget::Delta => &mut p.prefs.delta,
            ShockTarget::MuWealth => &mut p.prefs.mu_wealth,
            ShockTarget::A => &mut p.endow.a,
            ShockTarget::L => &mut p.endow.l,
            ShockTarget::I => &mut p.policy.i,
            ShockTarget::TauW => &mut p.policy.tau_w,
        };
        let step = self.direction.sign() * self.magnitude;
        if self.target.is_relative() {
            *field *= 1.0 + step;
        } else {
            *field += step;
        }
        p.validate()?;
        Ok(p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "-")]
    Minus,
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "+")]
    Plus,
}

impl Sign {
    pub fn of(delta: f64) -> Sign {
        if delta > SIGN_DEAD_ZONE {
            Sign::Plus
        } else if delta < -SIGN_DEAD_ZONE {
            Sign::Minus
        } else {
            Sign::Zero
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Minus => "-",
            Sign::Zero => "0",
            Sign::Plus => "+",
        })
    }
}

/// Responses of tightness, output, employment, unemployment and efficient
/// unemployment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Responses<T> {
    pub theta: T,
    pub y: T,
    pub n: T,
    pub u: T,
    pub u_star: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StaticsRow {
    pub shock: Shock,
    pub signs: Responses<Sign>,
    pub deltas: Responses<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShockOutcome {
    pub before: Equilibrium,
    pub after: Equilibrium,
    pub row: StaticsRow,
}

pub fn apply_shock(params: &ModelParams, shock: Shock) -> Result<ShockOutcome> {
    let shocked = shock.apply(params)?;
    let before = solve(params, DEFAULT_TOL)?;
    let after = solve(&shocked, DEFAULT_TOL)?;
    let u_star_before = efficient_unemployment(&params.matching)?;
    let u_star_after = efficient_unemployment(&shocked.matching)?;
    let deltas = Responses {
        theta: after.theta - before.theta,
        y: after.y - before.y,
        n: after.n - before.n,
        u: after.u - before.u,
        u_star: u_star_after - u_star_before,
    };
    let signs = Responses {
        theta: Sign::of(deltas.theta),
        y: Sign::of(deltas.y),
        n: Sign::of(deltas.n),
        u: Sign::of(deltas.u),
        u_star: Sign::of(deltas.u_star),
    };
    Ok(ShockOutcome {
        before,
        after,
        row: StaticsRow {
            shock,
            signs,
            deltas,
        },
    })
}

/// Shock sizes used by [`table1`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShockMagnitudes {
    /// Fractional change for delta, mu_wealth, a and l.
    pub relative: f64,
    /// Change per month for i and tau_w.
    pub absolute: f64,
}

impl Default for ShockMagnitudes {
    fn default() -> Self {
        ShockMagnitudes {
            relative: 0.10,
            absolute: 0.0025,
        }
    }
}

impl ShockMagnitudes {
    pub fn for_target(&self, target: ShockTarget) -> f64 {
        if target.is_relative() {
            self.relative
        } else {
            self.absolute
        }
    }
}

/// The six shocks of the business-cycle table, in table order.
pub fn table1_shocks(magnitudes: &ShockMagnitudes) -> [Shock; 6] {
    use Direction::*;
    use ShockTarget::*;
    [
        (Delta, Decrease),
        (MuWealth, Increase),
        (A, Decrease),
        (L, Decrease),
        (I, Decrease),
        (TauW, Increase),
    ]
    .map(|(target, direction)| Shock::new(target, direction, magnitudes.for_target(target)))
}

/// Expected signs (tightness, output, employment, unemployment, efficient
/// unemployment) for each row of [`table1_shocks`].
pub fn table1_expected() -> [Responses<Sign>; 6] {
    use Sign::*;
    let row = |theta, y, n, u| Responses {
        theta,
        y,
        n,
        u,
        u_star: Zero,
    };
    [
        row(Minus, Minus, Minus, Plus),
        row(Minus, Minus, Minus, Plus),
        row(Plus, Minus, Plus, Minus),
        row(Plus, Minus, Minus, Minus),
        row(Plus, Plus, Plus, Minus),
        row(Plus, Plus, Plus, Minus),
    ]
}

pub fn table1(params: &ModelParams, magnitudes: &ShockMagnitudes) -> Result<Vec<StaticsRow>> {
    table1_shocks(magnitudes)
        .into_iter()
        .map(|shock| apply_shock(params, shock).map(|o| o.row))
        .collect()
}

/// Writes statics rows as CSV: the sign columns of the business-cycle table
/// followed by the numeric changes.
pub fn write_statics_csv<W: Write>(rows: &[StaticsRow], mut out: W) -> io::Result<()> {
    writeln!(
        out,
        "group,shock,target,direction,magnitude,tightness,output,employment,unemployment_actual,unemployment_efficient,d_theta,d_y,d_n,d_u,d_u_star"
    )?;
    for row in rows {
        let s = &row.signs;
        let d = &row.deltas;
        let direction = match row.shock.direction {
            Direction::Increase => "increase",
            Direction::Decrease => "decrease",
        };
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            row.shock.target.group(),
            row.shock.label(),
            row.shock.target.key(),
            direction,
            num(row.shock.magnitude),
            s.theta,
            s.y,
            s.n,
            s.u,
            s.u_star,
            num(d.theta),
            num(d.y),
            num(d.n),
            num(d.u),
            num(d.u_star),
        )?;
    }
    Ok(())
}
