//! Command-line front end.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 configuration error (including
//! unparsable arguments), 3 numerical failure.

use std::fmt;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::warn;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::Config;
use crate::curves::{sample_curves, write_curves_csv};
use crate::dynamics::{
    costate_phase_line, integrate_unemployment, wealth_path, FiscalRule, TimePath,
};
use crate::efficiency::efficiency_report;
use crate::equilibrium::{solve, Equilibrium, ModelParams, DEFAULT_TOL};
use crate::error::ModelError;
use crate::output::{num, opt_num};
use crate::policy::{
    default_step, monetary_multiplier, optimal_rate_exact, optimal_rate_model,
    optimal_rate_sufficient_statistic, optimal_wealth_tax, optimal_wealth_tax_exact,
    optimal_wealth_tax_model, tax_multiplier, Instrument, PolicyPrescription,
};
use crate::statics::{
    apply_shock, table1, write_statics_csv, Direction, Shock, ShockMagnitudes, ShockTarget,
    StaticsRow,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "adas",
    version,
    about = "Matching-model AS/AD solver and policy calculator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve for the equilibrium and the efficient benchmark.
    Solve(CommonArgs),
    /// Sample the AS, AD and ZLB-AD curves on a tightness grid.
    Curves(CommonArgs),
    /// Apply one permanent shock and report the responses.
    Shock(ShockArgs),
    /// Run the six shocks of the business-cycle table.
    Table1(CommonArgs),
    /// Recommend a nominal rate or wealth tax that closes the unemployment gap.
    Policy(PolicyArgs),
    /// Integrate the unemployment, costate and wealth ODEs.
    Dynamics(DynamicsArgs),
    /// Solve the model over a range of one parameter.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    fn ext(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Configuration file of `key = value` lines.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output directory (created if missing).
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Encoding of the main data file.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Calibrate `mu_wealth` so equilibrium unemployment equals this rate.
    #[arg(long)]
    pub target_u: Option<f64>,
    #[arg(long)]
    pub mu: Option<f64>,
    #[arg(long)]
    pub eta: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub kappa: Option<f64>,
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub mu_wealth: Option<f64>,
    #[arg(long)]
    pub x0: Option<f64>,
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub l: Option<f64>,
    /// Nominal interest rate per month.
    #[arg(long)]
    pub i: Option<f64>,
    /// Inflation per month.
    #[arg(long)]
    pub pi: Option<f64>,
    #[arg(long)]
    pub tau_w: Option<f64>,
    #[arg(long)]
    pub theta_min: Option<f64>,
    #[arg(long)]
    pub theta_max: Option<f64>,
    #[arg(long)]
    pub theta_count: Option<usize>,
    /// Simulation horizon in months.
    #[arg(long)]
    pub horizon: Option<f64>,
    /// Integration step in months.
    #[arg(long)]
    pub dt: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct ShockArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// One of delta, mu_wealth, a, l, i, tau_w.
    #[arg(long)]
    pub target: String,
    #[arg(long, value_enum)]
    pub direction: ShockDirection,
    /// Fraction of the current value (delta, mu_wealth, a, l) or change per
    /// month (i, tau_w).
    #[arg(long)]
    pub magnitude: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ShockDirection {
    Increase,
    Decrease,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InstrumentArg {
    NominalRate,
    WealthTax,
}

#[derive(Debug, Clone, Args)]
pub struct PolicyArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, value_enum, default_value = "nominal-rate")]
    pub instrument: InstrumentArg,
    /// Unemployment gap as a fraction (0.05 = 5 pp). Defaults to the model's gap.
    #[arg(long, allow_hyphen_values = true)]
    pub gap: Option<f64>,
    /// Multiplier in pp of unemployment per pp of the instrument. Defaults
    /// to the model's multiplier.
    #[arg(long)]
    pub multiplier: Option<f64>,
    /// Solve the model for the instrument value that closes the gap exactly.
    #[arg(long, conflicts_with_all = ["gap", "multiplier"])]
    pub exact: bool,
}

#[derive(Debug, Clone, Args)]
pub struct DynamicsArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Initial unemployment rate. Defaults to the Beveridge rate at `--theta`.
    #[arg(long)]
    pub u0: Option<f64>,
    /// Tightness held fixed during the unemployment adjustment. Defaults to
    /// equilibrium tightness.
    #[arg(long)]
    pub theta: Option<f64>,
    /// Initial costate as a multiple of its critical point.
    #[arg(long, default_value_t = 1.0)]
    pub gamma_ratio: f64,
    /// Initial real wealth.
    #[arg(long, default_value_t = 1.0)]
    pub w0: f64,
    /// Constant real lump-sum tax. Without it the tax keeps real debt constant.
    #[arg(long, allow_hyphen_values = true)]
    pub real_tax: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Parameter key to vary, e.g. `i` or `mu_wealth`.
    #[arg(long)]
    pub param: String,
    #[arg(long, allow_hyphen_values = true)]
    pub from: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub to: f64,
    #[arg(long, default_value_t = 11)]
    pub count: usize,
}

#[derive(Debug)]
pub enum CliError {
    Io { path: PathBuf, source: io::Error },
    Model(ModelError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => EXIT_IO,
            CliError::Model(e) if e.is_configuration() => EXIT_CONFIG,
            CliError::Model(_) => EXIT_NUMERICAL,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
            CliError::Model(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        CliError::Model(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

impl CommonArgs {
    /// Configuration file values with command-line overrides applied.
    pub fn resolve(&self) -> CliResult<Config> {
        let mut cfg = match &self.config {
            Some(path) => Config::load(path).map_err(io_err(path))??,
            None => Config::default(),
        };
        let overrides = [
            ("mu", self.mu),
            ("eta", self.eta),
            ("lambda", self.lambda),
            ("kappa", self.kappa),
            ("sigma", self.sigma),
            ("delta", self.delta),
            ("mu_wealth", self.mu_wealth),
            ("x0", self.x0),
            ("a", self.a),
            ("l", self.l),
            ("i", self.i),
            ("pi", self.pi),
            ("tau_w", self.tau_w),
            ("target_u", self.target_u),
            ("theta_min", self.theta_min),
            ("theta_max", self.theta_max),
            ("horizon", self.horizon),
            ("dt", self.dt),
        ];
        for (key, value) in overrides {
            if let Some(x) = value {
                cfg.set(key, &num(x))?;
            }
        }
        if let Some(n) = self.theta_count {
            cfg.theta_count = n;
        }
        if let Some(dir) = &self.out {
            cfg.out_dir = dir.clone();
        }
        cfg.validate_run()?;
        Ok(cfg)
    }
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Curves(args) => cmd_curves(args),
        Command::Shock(args) => cmd_shock(args),
        Command::Table1(args) => cmd_table1(args),
        Command::Policy(args) => cmd_policy(args),
        Command::Dynamics(args) => cmd_dynamics(args),
        Command::Sweep(args) => cmd_sweep(args),
    }
}

struct Run {
    cfg: Config,
    params: ModelParams,
    format: Option<Format>,
}

impl Run {
    fn new(args: &CommonArgs) -> CliResult<Run> {
        let cfg = args.resolve()?;
        let params = cfg.model()?;
        Run::with_params(args, cfg, params)
    }

    /// A run whose model is never solved, so only the policy settings are
    /// checked.
    fn arithmetic(args: &CommonArgs) -> CliResult<Run> {
        let cfg = args.resolve()?;
        cfg.params.policy.validate()?;
        let params = cfg.params;
        Run::with_params(args, cfg, params)
    }

    fn with_params(args: &CommonArgs, cfg: Config, params: ModelParams) -> CliResult<Run> {
        fs::create_dir_all(&cfg.out_dir).map_err(io_err(&cfg.out_dir))?;
        Ok(Run {
            cfg,
            params,
            format: args.format,
        })
    }

    fn path(&self, name: &str) -> PathBuf {
        self.cfg.out_dir.join(name)
    }

    fn write_with<F>(&self, name: &str, body: F) -> CliResult<PathBuf>
    where
        F: FnOnce(&mut BufWriter<File>) -> io::Result<()>,
    {
        let path = self.path(name);
        let file = File::create(&path).map_err(io_err(&path))?;
        let mut out = BufWriter::new(file);
        body(&mut out)
            .and_then(|_| out.flush())
            .map_err(io_err(&path))?;
        Ok(path)
    }

    fn write_json<T: Serialize>(&self, name: &str, value: &T) -> CliResult<PathBuf> {
        self.write_with(name, |out| {
            serde_json::to_writer_pretty(&mut *out, value).map_err(io::Error::from)?;
            writeln!(out)
        })
    }

    /// Writes a record as `name.json` or as a `field,value` CSV.
    fn write_record<T: Serialize>(
        &self,
        stem: &str,
        value: &T,
        default: Format,
    ) -> CliResult<PathBuf> {
        let format = self.format.unwrap_or(default);
        let name = format!("{stem}.{}", format.ext());
        match format {
            Format::Json => self.write_json(&name, value),
            Format::Csv => {
                let mut fields = Vec::new();
                flatten(
                    "",
                    &serde_json::to_value(value).expect("serializable"),
                    &mut fields,
                );
                self.write_with(&name, |out| {
                    writeln!(out, "field,value")?;
                    for (k, v) in &fields {
                        writeln!(out, "{k},{v}")?;
                    }
                    Ok(())
                })
            }
        }
    }

    fn params_json(&self) -> Value {
        serde_json::to_value(self.params).expect("serializable")
    }
}

fn flatten(prefix: &str, value: &Value, out: &mut Vec<(String, String)>) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, v, out);
            }
        }
        Value::Null => out.push((prefix.to_string(), String::new())),
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

fn report(paths: &[PathBuf]) {
    for p in paths {
        println!("wrote {}", p.display());
    }
}

#[derive(Serialize)]
struct SolveOutput<'a> {
    #[serde(flatten)]
    equilibrium: &'a Equilibrium,
    params: &'a ModelParams,
}

pub fn cmd_solve(args: &CommonArgs) -> CliResult<()> {
    let run = Run::new(args)?;
    let eq = solve(&run.params, DEFAULT_TOL)?;
    let eff = efficiency_report(&run.params)?;
    let a = run.write_record(
        "equilibrium",
        &SolveOutput {
            equilibrium: &eq,
            params: &run.params,
        },
        Format::Json,
    )?;
    let b = run.write_record("efficiency", &eff, Format::Json)?;
    println!(
        "theta = {}, u = {}, u* = {}, gap = {:.4} pp",
        num(eq.theta),
        num(eq.u),
        num(eff.u_star),
        100.0 * eff.gap
    );
    report(&[a, b]);
    Ok(())
}

pub fn cmd_curves(args: &CommonArgs) -> CliResult<()> {
    let run = Run::new(args)?;
    let p = &run.params;
    let eq = solve(p, DEFAULT_TOL)?;
    let theta_star = efficiency_report(p).ok().map(|r| r.theta_star);
    let theta_tau = p.matching.theta_tau();
    let edge = theta_tau * (1.0 - 1e-9);
    let lo = run.cfg.theta_min.unwrap_or(0.0);
    let hi = run.cfg.theta_max.unwrap_or_else(|| {
        let reach = 3.0 * eq.theta.max(theta_star.unwrap_or(0.0));
        reach.min(edge)
    });
    if !(hi >= lo) {
        return Err(
            ModelError::Config(format!("theta_max ({hi}) is below theta_min ({lo})")).into(),
        );
    }
    let n = run.cfg.theta_count;
    let grid: Vec<f64> = (0..n)
        .map(|k| {
            if n == 1 {
                lo
            } else {
                lo + (hi - lo) * k as f64 / (n - 1) as f64
            }
        })
        .collect();
    let rows = sample_curves(&grid, &p.matching, &p.endow, &p.prefs, &p.policy)?;
    let skipped = rows.iter().filter(|r| !r.is_valid()).count();
    if skipped > 0 {
        warn!("{skipped} grid points lie outside the curves' domain");
    }
    let data = match run.format.unwrap_or(Format::Csv) {
        Format::Csv => run.write_with("curves.csv", |out| write_curves_csv(&rows, out))?,
        Format::Json => run.write_json("curves.json", &rows)?,
    };
    let sidecar = json!({
        "markers": {
            "theta_eq": eq.theta,
            "y_eq": eq.y,
            "theta_star": theta_star,
            "theta_tau": if theta_tau.is_finite() { Some(theta_tau) } else { None },
        },
        "grid": { "min": lo, "max": hi, "count": n },
        "params": run.params_json(),
    });
    let meta = run.write_json("curves.meta.json", &sidecar)?;
    report(&[data, meta]);
    Ok(())
}

fn write_statics(run: &Run, rows: &[StaticsRow]) -> CliResult<PathBuf> {
    match run.format.unwrap_or(Format::Csv) {
        Format::Csv => run.write_with("statics.csv", |out| write_statics_csv(rows, out)),
        Format::Json => run.write_json("statics.json", &rows),
    }
}

fn print_statics(rows: &[StaticsRow]) {
    for row in rows {
        let s = row.signs;
        println!(
            "{:<40} theta {} y {} n {} u {} u* {}",
            row.shock.label(),
            s.theta,
            s.y,
            s.n,
            s.u,
            s.u_star
        );
    }
}

pub fn cmd_shock(args: &ShockArgs) -> CliResult<()> {
    let target: ShockTarget = args.target.parse()?;
    let run = Run::new(&args.common)?;
    let direction = match args.direction {
        ShockDirection::Increase => Direction::Increase,
        ShockDirection::Decrease => Direction::Decrease,
    };
    let magnitude = args
        .magnitude
        .unwrap_or_else(|| ShockMagnitudes::default().for_target(target));
    let outcome = apply_shock(&run.params, Shock::new(target, direction, magnitude))?;
    let rows = [outcome.row];
    let path = write_statics(&run, &rows)?;
    print_statics(&rows);
    report(&[path]);
    Ok(())
}

pub fn cmd_table1(args: &CommonArgs) -> CliResult<()> {
    let run = Run::new(args)?;
    let rows = table1(&run.params, &ShockMagnitudes::default())?;
    let path = write_statics(&run, &rows)?;
    print_statics(&rows);
    report(&[path]);
    Ok(())
}

pub fn cmd_policy(args: &PolicyArgs) -> CliResult<()> {
    let run = if args.gap.is_some() && args.multiplier.is_some() {
        Run::arithmetic(&args.common)?
    } else {
        Run::new(&args.common)?
    };
    let p = &run.params;
    let prescription: PolicyPrescription = match (args.instrument, args.exact) {
        (InstrumentArg::NominalRate, true) => optimal_rate_exact(p)?,
        (InstrumentArg::WealthTax, true) => optimal_wealth_tax_exact(p)?,
        (instrument, false) if args.gap.is_none() && args.multiplier.is_none() => {
            match instrument {
                InstrumentArg::NominalRate => optimal_rate_model(p)?,
                InstrumentArg::WealthTax => optimal_wealth_tax_model(p)?,
            }
        }
        (instrument, false) => {
            let gap = match args.gap {
                Some(g) => g,
                None => efficiency_report(p)?.gap,
            };
            match instrument {
                InstrumentArg::NominalRate => {
                    let m = match args.multiplier {
                        Some(m) => m,
                        None => monetary_multiplier(p, default_step(p))?.value,
                    };
                    optimal_rate_sufficient_statistic(gap, m, p.policy.i)?
                }
                InstrumentArg::WealthTax => {
                    let m = match args.multiplier {
                        Some(m) => m,
                        None => tax_multiplier(p, default_step(p))?.value,
                    };
                    optimal_wealth_tax(gap, m, p.policy.tau_w)?
                }
            }
        }
    };
    debug_assert!(matches!(
        (prescription.instrument, args.instrument),
        (Instrument::NominalRate, InstrumentArg::NominalRate)
            | (Instrument::WealthTax, InstrumentArg::WealthTax)
    ));
    let path = run.write_record("policy", &prescription, Format::Json)?;
    println!("{}", prescription.summary());
    report(&[path]);
    Ok(())
}

fn write_path(
    run: &Run,
    stem: &str,
    path: &TimePath,
    extra: Value,
    flags: &Value,
) -> CliResult<Vec<PathBuf>> {
    let data = match run.format.unwrap_or(Format::Csv) {
        Format::Csv => run.write_with(&format!("{stem}.csv"), |out| path.write_csv(out))?,
        Format::Json => run.write_json(
            &format!("{stem}.json"),
            &json!({
                "times": path.times,
                "values": path.values,
            }),
        )?,
    };
    let sidecar = json!({
        "state_label": path.state_label.as_str(),
        "truncated": path.truncated,
        "samples": path.len(),
        "details": extra,
        "flags": flags,
        "params": run.params_json(),
    });
    let meta = run.write_json(&format!("{stem}.meta.json"), &sidecar)?;
    Ok(vec![data, meta])
}

pub fn cmd_dynamics(args: &DynamicsArgs) -> CliResult<()> {
    let run = Run::new(&args.common)?;
    let p = &run.params;
    let (horizon, dt) = (run.cfg.horizon, run.cfg.dt);
    let eq = solve(p, DEFAULT_TOL)?;
    let theta = args.theta.unwrap_or(eq.theta);
    let u0 = match args.u0 {
        Some(u) => u,
        None => p.matching.beveridge_unemployment(theta)?,
    };
    let flags = json!({
        "u0": u0,
        "theta": theta,
        "gamma_ratio": args.gamma_ratio,
        "w0": args.w0,
        "real_tax": args.real_tax,
        "horizon": horizon,
        "dt": dt,
    });
    let mut written = Vec::new();

    let u_path = integrate_unemployment(u0, theta, &p.matching, horizon, dt)?;
    let u_target = p.matching.beveridge_unemployment(theta)?;
    written.extend(write_path(
        &run,
        "unemployment",
        &u_path,
        json!({ "beveridge_u": u_target, "decay_rate": p.matching.lambda + p.matching.job_finding_rate(theta)? }),
        &flags,
    )?);

    let costate = costate_phase_line(
        eq.gamma0 * args.gamma_ratio,
        &p.prefs,
        &p.policy,
        horizon,
        dt,
    )?;
    written.extend(write_path(
        &run,
        "costate",
        &costate.path,
        json!({
            "critical_point": costate.critical_point,
            "stability": costate.stability,
            "divergence": costate.divergence,
        }),
        &flags,
    )?);

    let fiscal = match args.real_tax {
        Some(t) => FiscalRule::constant(t),
        None => FiscalRule::BalanceDebt,
    };
    let wealth = wealth_path(args.w0, &eq, &fiscal, &p.policy, horizon, dt)?;
    let fiscal_json = serde_json::to_value(&fiscal).expect("serializable");
    for (stem, path) in [
        ("wealth", &wealth.wealth),
        ("price", &wealth.price),
        ("bonds", &wealth.bonds),
    ] {
        written.extend(write_path(
            &run,
            stem,
            path,
            json!({ "fiscal_rule": fiscal_json }),
            &flags,
        )?);
    }

    if let Some((t, u)) = u_path.last() {
        println!(
            "u({}) = {}, Beveridge u = {}",
            num(t),
            num(u),
            num(u_target)
        );
    }
    println!(
        "costate critical point {} ({:?}), divergence: {:?}",
        num(costate.critical_point),
        costate.stability,
        costate.divergence
    );
    report(&written);
    Ok(())
}

#[derive(Serialize)]
struct SweepRow {
    value: f64,
    theta: Option<f64>,
    y: Option<f64>,
    u: Option<f64>,
    u_star: Option<f64>,
    gap: Option<f64>,
    wedge: Option<f64>,
    error: Option<String>,
}

pub fn cmd_sweep(args: &SweepArgs) -> CliResult<()> {
    if !crate::config::KEYS[..13].contains(&args.param.as_str()) {
        return Err(ModelError::Config(format!("cannot sweep `{}`", args.param)).into());
    }
    if args.count == 0 {
        return Err(ModelError::Config("sweep count must be at least 1".into()).into());
    }
    let run = Run::new(&args.common)?;
    let n = args.count;
    let rows: Vec<SweepRow> = (0..n)
        .map(|k| {
            let value = if n == 1 {
                args.from
            } else {
                args.from + (args.to - args.from) * k as f64 / (n - 1) as f64
            };
            let mut cfg = run.cfg.clone();
            cfg.params = run.params;
            cfg.target_u = None;
            let outcome = cfg
                .set(&args.param, &num(value))
                .and_then(|_| cfg.model())
                .and_then(|p| Ok((solve(&p, DEFAULT_TOL)?, efficiency_report(&p)?)));
            match outcome {
                Ok((eq, eff)) => SweepRow {
                    value,
                    theta: Some(eq.theta),
                    y: Some(eq.y),
                    u: Some(eq.u),
                    u_star: Some(eff.u_star),
                    gap: Some(eff.gap),
                    wedge: Some(eq.wedge),
                    error: None,
                },
                Err(e) => {
                    warn!("{} = {}: {e}", args.param, num(value));
                    SweepRow {
                        value,
                        theta: None,
                        y: None,
                        u: None,
                        u_star: None,
                        gap: None,
                        wedge: None,
                        error: Some(e.to_string()),
                    }
                }
            }
        })
        .collect();
    let path = match run.format.unwrap_or(Format::Csv) {
        Format::Json => run.write_json("sweep.json", &rows)?,
        Format::Csv => run.write_with("sweep.csv", |out| {
            writeln!(out, "{},theta,y,u,u_star,gap,wedge", args.param)?;
            for r in &rows {
                writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    num(r.value),
                    opt_num(r.theta),
                    opt_num(r.y),
                    opt_num(r.u),
                    opt_num(r.u_star),
                    opt_num(r.gap),
                    opt_num(r.wedge)
                )?;
            }
            Ok(())
        })?,
    };
    report(&[path]);
    Ok(())
}
