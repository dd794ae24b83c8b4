//! Command-line front end.
//!
//! Angles are read and written in degrees; everything behind this module
//! works in radians.

mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::{info, warn};

use crate::direct::{hypersonic_sweep, solve_direct, MONOTONE_SLACK};
use crate::error::Error;
use crate::gas::GasParameters;
use crate::measures::{convergence_report, TestFunction};
use crate::shock::{chaplygin_shock_angle, chaplygin_surface_pressure, ChaplyginParameters};
use crate::taylor_maccoll::oracle::{rk4_cone_angle, CrossingRule};
use crate::taylor_maccoll::{integrate_inverse, IntegratorOptions};

pub use output::{
    ChaplyginReport, DirectReport, GridPoint, InverseReport, OracleReport, SweepRow,
};

/// Environment variable holding the log filter (`error`, `info`, `debug`, ...).
pub const LOG_ENV: &str = "CONICAL_SHOCK_LOG";

/// Step of the fixed-step oracle run by `--seed-oracle`, radians.
pub const ORACLE_STEP: f64 = 1e-6;

pub mod exit {
    pub const OK: i32 = 0;
    pub const OTHER: i32 = 1;
    /// Invalid input: angle out of range, nonpositive tolerance, bad flag.
    pub const DOMAIN: i32 = 2;
    /// The solver found no admissible solution in the requested regime.
    pub const SOLVER: i32 = 3;
    pub const IO: i32 = 4;
}

#[derive(Debug, Parser)]
#[command(name = "conical-shock", version, about = "Supersonic and hypersonic flow past a circular cone")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Shock angle for a given cone.
    Direct(DirectArgs),
    /// Cone angle reached from a given shock.
    Inverse(InverseArgs),
    /// Direct solutions along a decreasing list of epsilon.
    Sweep(SweepArgs),
    /// Gaps between the epsilon measures and the limit measure.
    Measures(MeasuresArgs),
    /// Discontinuity angle and surface pressure for a Chaplygin gas.
    Chaplygin(ChaplyginArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct GasArgs {
    /// gamma - 1.
    #[arg(long, conflicts_with = "mach")]
    pub epsilon: Option<f64>,
    /// Upstream Mach number; sets epsilon = 1/(M0²(E0 - 1/2)).
    #[arg(long = "M0", id = "mach")]
    pub mach: Option<f64>,
    /// Specific total enthalpy of the incoming flow.
    #[arg(long = "E0", default_value_t = 1.0)]
    pub e0: f64,
}

impl GasArgs {
    fn params(&self) -> Result<GasParameters, Error> {
        let epsilon = match (self.epsilon, self.mach) {
            (Some(e), _) => e,
            (None, Some(m)) => {
                if !(m > 0.0) || !(self.e0 > 0.5) {
                    return Err(Error::Domain(format!("need M0 > 0 and E0 > 1/2, got M0 = {m}, E0 = {}", self.e0)));
                }
                1.0 / (m * m * (self.e0 - 0.5))
            }
            (None, None) => return Err(Error::Domain("one of --epsilon or --M0 is required".into())),
        };
        GasParameters::new(epsilon, self.e0)
    }
}

#[derive(Debug, Args)]
pub struct TolArgs {
    #[arg(long, default_value_t = 1e-10)]
    pub rel_tol: f64,
    #[arg(long, default_value_t = 1e-12)]
    pub abs_tol: f64,
}

impl TolArgs {
    fn options(&self) -> Result<IntegratorOptions, Error> {
        let opts = IntegratorOptions::default().with_tolerances(self.rel_tol, self.abs_tol);
        opts.validate()?;
        Ok(opts)
    }
}

#[derive(Debug, Args)]
pub struct OutArgs {
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct DirectArgs {
    /// Cone half-angle, degrees.
    #[arg(long)]
    pub theta0: f64,
    #[command(flatten)]
    pub gas: GasArgs,
    /// Tolerance on the cone-angle residual, radians.
    #[arg(long, default_value_t = crate::direct::DEFAULT_ANGLE_TOL)]
    pub angle_tol: f64,
    #[command(flatten)]
    pub tol: TolArgs,
    /// Also run the fixed-step RK4 reference and report the cone-angle discrepancy.
    #[arg(long)]
    pub seed_oracle: bool,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct InverseArgs {
    /// Shock half-angle, degrees.
    #[arg(long)]
    pub beta: f64,
    #[command(flatten)]
    pub gas: GasArgs,
    #[command(flatten)]
    pub tol: TolArgs,
    #[arg(long)]
    pub seed_oracle: bool,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Cone half-angle, degrees.
    #[arg(long)]
    pub theta0: f64,
    /// Strictly decreasing epsilon ladder.
    #[arg(long, value_delimiter = ',', default_value = "0.08,0.04,0.02,0.01")]
    pub eps: Vec<f64>,
    #[arg(long = "E0", default_value_t = 1.0)]
    pub e0: f64,
    #[arg(long, default_value_t = crate::direct::DEFAULT_ANGLE_TOL)]
    pub angle_tol: f64,
    #[command(flatten)]
    pub tol: TolArgs,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct MeasuresArgs {
    /// Cone half-angle, degrees.
    #[arg(long)]
    pub theta0: f64,
    #[arg(long, value_delimiter = ',', default_value = "0.08,0.04,0.02,0.01")]
    pub eps: Vec<f64>,
    #[arg(long = "E0", default_value_t = 1.0)]
    pub e0: f64,
    #[arg(long, default_value_t = crate::direct::DEFAULT_ANGLE_TOL)]
    pub angle_tol: f64,
    #[command(flatten)]
    pub tol: TolArgs,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct ChaplyginArgs {
    #[arg(long = "M0")]
    pub mach: f64,
    /// Cone half-angle, degrees.
    #[arg(long)]
    pub theta0: f64,
    /// Upstream density.
    #[arg(long, default_value_t = 1.0)]
    pub rho0: f64,
    #[command(flatten)]
    pub out: OutArgs,
}

/// Failure of a CLI command, carrying its exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Solver(#[from] Error),
    #[error("i/o error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Other(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Solver(e) => solver_exit_code(e),
            CliError::Io { .. } => exit::IO,
            CliError::Other(_) => exit::OTHER,
        }
    }
}

/// Exit code for a library error.
pub fn solver_exit_code(e: &Error) -> i32 {
    match e {
        Error::Domain(_) => exit::DOMAIN,
        Error::KindMismatch(_) => exit::OTHER,
        Error::NonPhysical(_)
        | Error::SubsonicNormal { .. }
        | Error::SonicNormal { .. }
        | Error::Regime(_)
        | Error::SonicSingularity { .. }
        | Error::NoConeFound { .. }
        | Error::InvariantRegionExit { .. }
        | Error::StepBudget(_)
        | Error::NoBracket(_)
        | Error::NotConverged { .. } => exit::SOLVER,
    }
}

/// Parses the process arguments, runs the command and returns the exit code.
pub fn run() -> i32 {
    run_from(std::env::args_os())
}

pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let _ = env_logger::Builder::from_env(env_logger::Env::new().filter_or(LOG_ENV, "warn")).try_init();
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { exit::DOMAIN } else { exit::OK };
        }
    };
    match execute(&cli.command) {
        Ok(()) => exit::OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(command: &Command) -> Result<(), CliError> {
    match command {
        Command::Direct(a) => cmd_direct(a),
        Command::Inverse(a) => cmd_inverse(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Measures(a) => cmd_measures(a),
        Command::Chaplygin(a) => cmd_chaplygin(a),
    }
}

/// Converts an angle given in degrees, rejecting values outside `(0, 90)`.
fn angle_deg(name: &str, degrees: f64) -> Result<f64, Error> {
    if !(degrees > 0.0 && degrees < 90.0) {
        return Err(Error::Domain(format!("{name} must lie in (0, 90) degrees, got {degrees}")));
    }
    Ok(degrees.to_radians())
}

fn oracle_report(beta: f64, theta_cone: f64, params: &GasParameters, opts: &IntegratorOptions) -> Result<OracleReport, Error> {
    let o = rk4_cone_angle(beta, params, ORACLE_STEP, CrossingRule::Linear, opts.theta_floor)?;
    let discrepancy = (o.theta_cone - theta_cone).abs();
    info!("oracle: theta_cone = {} rad, |difference| = {discrepancy:e}", o.theta_cone);
    Ok(OracleReport { step: ORACLE_STEP, theta_cone_deg: o.theta_cone.to_degrees(), discrepancy_deg: discrepancy.to_degrees() })
}

fn cmd_direct(a: &DirectArgs) -> Result<(), CliError> {
    let params = a.gas.params()?;
    let opts = a.tol.options()?;
    let theta0 = angle_deg("theta0", a.theta0)?;
    info!("direct: theta0 = {} deg, epsilon = {}, E0 = {}", a.theta0, params.epsilon, params.e0);
    let sol = solve_direct(theta0, &params, &opts, a.angle_tol)?;
    let oracle = if a.seed_oracle { Some(oracle_report(sol.beta, sol.field.theta_cone, &params, &opts)?) } else { None };
    let report = DirectReport::new(&sol, oracle);
    match a.out.format.unwrap_or(Format::Json) {
        Format::Json => output::emit_json(a.out.out.as_deref(), &report),
        Format::Csv => output::emit_csv(a.out.out.as_deref(), &report.grid),
    }
}

fn cmd_inverse(a: &InverseArgs) -> Result<(), CliError> {
    let params = a.gas.params()?;
    let opts = a.tol.options()?;
    let beta = angle_deg("beta", a.beta)?;
    let field = integrate_inverse(beta, &params, &opts)?;
    let oracle = if a.seed_oracle { Some(oracle_report(beta, field.theta_cone, &params, &opts)?) } else { None };
    let report = InverseReport::new(&field, oracle);
    match a.out.format.unwrap_or(Format::Json) {
        Format::Json => output::emit_json(a.out.out.as_deref(), &report),
        Format::Csv => output::emit_csv(a.out.out.as_deref(), &report.grid),
    }
}

fn cmd_sweep(a: &SweepArgs) -> Result<(), CliError> {
    let opts = a.tol.options()?;
    let theta0 = angle_deg("theta0", a.theta0)?;
    let result = hypersonic_sweep(theta0, &a.eps, a.e0, &opts, a.angle_tol)?;
    for r in &result.records {
        if let Err(msg) = &r.outcome {
            warn!("epsilon = {}: {msg}", r.epsilon);
        }
    }
    if result.records.iter().all(|r| r.outcome.is_err()) {
        return Err(Error::NoBracket(format!("no rung of the sweep converged at theta0 = {} deg", a.theta0)).into());
    }
    if !result.gaps_monotone(MONOTONE_SLACK) {
        warn!("shock-cone gap is not decreasing along the ladder");
    }
    if !result.pressures_converging(MONOTONE_SLACK) {
        warn!("surface pressure is not approaching sin^2(theta0) monotonically");
    }
    let rows = SweepRow::from_result(&result);
    match a.out.format.unwrap_or(Format::Csv) {
        Format::Json => output::emit_json(a.out.out.as_deref(), &rows),
        Format::Csv => output::emit_csv(a.out.out.as_deref(), &rows),
    }
}

fn cmd_measures(a: &MeasuresArgs) -> Result<(), CliError> {
    let opts = a.tol.options()?;
    let theta0 = angle_deg("theta0", a.theta0)?;
    let suite = TestFunction::default_suite(theta0);
    let report = convergence_report(theta0, &a.eps, &suite, a.e0, &opts, a.angle_tol)?;
    for (eps, msg) in &report.failures {
        warn!("epsilon = {eps}: {msg}");
    }
    match a.out.format.unwrap_or(Format::Csv) {
        Format::Json => output::emit_json(a.out.out.as_deref(), &report),
        Format::Csv => output::emit_csv(a.out.out.as_deref(), &output::gap_rows(&report)),
    }
}

fn cmd_chaplygin(a: &ChaplyginArgs) -> Result<(), CliError> {
    let theta0 = angle_deg("theta0", a.theta0)?;
    let chap = ChaplyginParameters::new(1.0, 1.0, a.rho0, a.mach)?;
    let beta0 = chaplygin_shock_angle(a.mach)?;
    let attached = !(a.mach * theta0.sin() > 1.0 + 1e-12);
    let surface_pressure = if chap.is_concentrated(theta0) { Some(chaplygin_surface_pressure(theta0, &chap)?) } else { None };
    let report = ChaplyginReport { m0: a.mach, theta0_deg: a.theta0, rho0: a.rho0, beta0_deg: beta0.to_degrees(), attached, surface_pressure };
    match a.out.format {
        Some(Format::Json) => output::emit_json(a.out.out.as_deref(), &report),
        Some(Format::Csv) => output::emit_csv(a.out.out.as_deref(), std::slice::from_ref(&report)),
        None => output::emit_text(a.out.out.as_deref(), &report.to_text()),
    }
}
