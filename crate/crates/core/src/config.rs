//! Flat `key = value` run configuration.
//!
//! One assignment per line, `#` starts a comment. Keys not present fall back
//! to the default calibration; unknown keys are rejected.

use std::fs;
use std::path::{Path, PathBuf};

use log::info;

use crate::dynamics::DEFAULT_DT;
use crate::equilibrium::{calibrate_demand, ModelParams};
use crate::error::{ModelError, Result};

pub const KEYS: [&str; 20] = [
    "mu",
    "eta",
    "lambda",
    "kappa",
    "sigma",
    "delta",
    "mu_wealth",
    "x0",
    "a",
    "l",
    "i",
    "pi",
    "tau_w",
    "target_u",
    "out_dir",
    "theta_min",
    "theta_max",
    "theta_count",
    "horizon",
    "dt",
];

pub const DEFAULT_HORIZON: f64 = 120.0;
pub const DEFAULT_THETA_COUNT: usize = 301;

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub params: ModelParams,
    /// When set, `mu_wealth` is recalibrated so equilibrium unemployment
    /// equals this rate.
    pub target_u: Option<f64>,
    pub out_dir: PathBuf,
    pub theta_min: Option<f64>,
    pub theta_max: Option<f64>,
    pub theta_count: usize,
    pub horizon: f64,
    pub dt: f64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            params: ModelParams::default(),
            target_u: None,
            out_dir: PathBuf::from("."),
            theta_min: None,
            theta_max: None,
            theta_count: DEFAULT_THETA_COUNT,
            horizon: DEFAULT_HORIZON,
            dt: DEFAULT_DT,
        }
    }
}

impl Config {
    pub fn load(path: &Path) -> std::io::Result<Result<Config>> {
        let text = fs::read_to_string(path)?;
        Ok(Config::parse(&text))
    }

    pub fn parse(text: &str) -> Result<Config> {
        let mut cfg = Config::default();
        let mut seen: Vec<&str> = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                ModelError::Config(format!("line {}: expected `key = value`", n + 1))
            })?;
            let key = key.trim();
            let value = value.trim();
            let known = KEYS.iter().find(|k| **k == key).ok_or_else(|| {
                ModelError::Config(format!("line {}: unknown key `{key}`", n + 1))
            })?;
            if seen.contains(known) {
                return Err(ModelError::Config(format!(
                    "line {}: duplicate key `{key}`",
                    n + 1
                )));
            }
            seen.push(known);
            cfg.set(key, value)?;
        }
        let missing: Vec<&str> = KEYS
            .iter()
            .copied()
            .filter(|k| !seen.contains(k) && is_model_key(k))
            .collect();
        if !missing.is_empty() {
            info!("using default calibration for: {}", missing.join(", "));
        }
        Ok(cfg)
    }

    /// Assigns one key from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let p = &mut self.params;
        match key {
            "mu" => p.matching.mu = number(key, value)?,
            "eta" => p.matching.eta = number(key, value)?,
            "lambda" => p.matching.lambda = number(key, value)?,
            "kappa" => p.matching.kappa = number(key, value)?,
            "sigma" => p.prefs.sigma = number(key, value)?,
            "delta" => p.prefs.delta = number(key, value)?,
            "mu_wealth" => p.prefs.mu_wealth = number(key, value)?,
            "x0" => p.prefs.x0 = number(key, value)?,
            "a" => p.endow.a = number(key, value)?,
            "l" => p.endow.l = number(key, value)?,
            "i" => p.policy.i = number(key, value)?,
            "pi" => p.policy.pi = number(key, value)?,
            "tau_w" => p.policy.tau_w = number(key, value)?,
            "target_u" => self.target_u = Some(number(key, value)?),
            "out_dir" => self.out_dir = PathBuf::from(value),
            "theta_min" => self.theta_min = Some(number(key, value)?),
            "theta_max" => self.theta_max = Some(number(key, value)?),
            "theta_count" => {
                self.theta_count = value.parse().map_err(|_| {
                    ModelError::Config(format!(
                        "`theta_count` must be a positive integer, got `{value}`"
                    ))
                })?
            }
            "horizon" => self.horizon = number(key, value)?,
            "dt" => self.dt = number(key, value)?,
            _ => return Err(ModelError::Config(format!("unknown key `{key}`"))),
        }
        Ok(())
    }

    /// Model parameters after demand calibration, validated.
    pub fn model(&self) -> Result<ModelParams> {
        self.params.validate()?;
        match self.target_u {
            Some(u) => {
                let mu_wealth = calibrate_demand(u, &self.params)?;
                let params = self.params.with_mu_wealth(mu_wealth);
                params.validate()?;
                Ok(params)
            }
            None => Ok(self.params),
        }
    }

    pub fn validate_run(&self) -> Result<()> {
        if self.theta_count == 0 {
            return Err(ModelError::Config("theta_count must be at least 1".into()));
        }
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(ModelError::Config(format!(
                "horizon must be positive, got {}",
                self.horizon
            )));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(ModelError::Config(format!(
                "dt must be positive, got {}",
                self.dt
            )));
        }
        Ok(())
    }
}

fn is_model_key(key: &str) -> bool {
    KEYS[..13].contains(&key)
}

fn number(key: &str, value: &str) -> Result<f64> {
    let x: f64 = value
        .parse()
        .map_err(|_| ModelError::Config(format!("`{key}` must be a number, got `{value}`")))?;
    if !x.is_finite() {
        return Err(ModelError::Config(format!(
            "`{key}` must be finite, got `{value}`"
        )));
    }
    Ok(x)
}
