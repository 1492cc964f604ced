//! Command-line front end: pinching reports, parameter sweeps, Monte Carlo
//! scalar-curvature checks and product bounds, emitted as JSON or CSV.

pub mod commands;
pub mod parse;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

pub use parse::{parse_model, parse_point, SValue};

pub const SCHEMA_VERSION: u32 = 1;

/// Exit code for a verification failure.
pub const EXIT_FAIL: i32 = 1;
/// Exit code for invalid flags or inputs.
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(pub String);

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Usage(#[from] UsageError),
    #[error("{0}")]
    Model(#[from] kahler_pinch::Error),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot encode output: {0}")]
    Encode(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use kahler_pinch::Error as E;
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Model(
                E::PositivityViolated { .. }
                | E::InvalidParameter(_)
                | E::CommonBoundViolated { .. }
                | E::DimensionMismatch { .. }
                | E::EmptyGrid
                | E::StepUnderflow(_),
            ) => EXIT_USAGE,
            _ => EXIT_FAIL,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "kahler", version, about = "Curvature and pinching of Kähler metrics on Hirzebruch surfaces")]
pub struct Cli {
    /// Output format
    #[arg(long, value_enum, global = true, default_value = "json")]
    pub format: Format,
    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Subcommand)]
pub enum Command {
    /// Sweep one fiber of (F_n, ω_s) and compare with the closed-form pinching
    Pinch {
        #[arg(long)]
        n: u32,
        /// Decimal or p/q; defaults to the optimal value 1/(2n²+n)
        #[arg(long)]
        s: Option<String>,
        #[arg(long, default_value_t = 512)]
        grid: usize,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Numerical pinching over a uniform grid of admissible s
    SweepS {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 999)]
        points: usize,
        /// Fiber grid per s value
        #[arg(long, default_value_t = 32)]
        grid: usize,
    },
    /// Summary checks for n = 1..n at the optimal s
    Verify {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 512)]
        grid: usize,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Relative tolerance of deterministic comparisons
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Relative tolerance of the Monte Carlo scalar curvature
        #[arg(long, default_value_t = 0.02)]
        mc_tol: f64,
    },
    /// Monte Carlo average of K over the unit sphere against the traced scalar curvature
    Berger {
        /// fsM, hitchin:N:S, or a JSON descriptor
        #[arg(long)]
        model: String,
        /// Number of sample points in the chart
        #[arg(long, default_value_t = 5)]
        points: usize,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        antithetic: bool,
    },
    /// Pinching of a product of two models
    Product {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        /// Sample points per factor
        #[arg(long, default_value_t = 4)]
        grid: usize,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Metric, curvature tensor, Ricci form and extremal K at one point
    Curvature {
        #[arg(long)]
        model: String,
        /// Comma-separated complex coordinates, e.g. 0.5,1+2i
        #[arg(long)]
        point: String,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Pinch { .. } => "pinch",
            Command::SweepS { .. } => "sweep-s",
            Command::Verify { .. } => "verify",
            Command::Berger { .. } => "berger",
            Command::Product { .. } => "product",
            Command::Curvature { .. } => "curvature",
        }
    }
}

/// A validated invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self, UsageError> {
        let positive = |name: &str, x: f64| {
            if x > 0.0 && x.is_finite() {
                Ok(())
            } else {
                Err(UsageError(format!("--{name} must be positive, got {x}")))
            }
        };
        let at_least = |name: &str, x: usize, min: usize| {
            if x >= min {
                Ok(())
            } else {
                Err(UsageError(format!("--{name} must be at least {min}, got {x}")))
            }
        };
        let n_ok = |n: u32| if n >= 1 { Ok(()) } else { Err(UsageError("--n must be at least 1".into())) };
        match &cli.command {
            Command::Pinch { n, grid, tol, .. } => {
                n_ok(*n)?;
                at_least("grid", *grid, 2)?;
                positive("tol", *tol)?;
            }
            Command::SweepS { n, points, grid } => {
                n_ok(*n)?;
                at_least("points", *points, 1)?;
                at_least("grid", *grid, 2)?;
            }
            Command::Verify { n, grid, samples, tol, mc_tol, .. } => {
                n_ok(*n)?;
                at_least("grid", *grid, 2)?;
                at_least("samples", *samples, 2)?;
                positive("tol", *tol)?;
                positive("mc-tol", *mc_tol)?;
            }
            Command::Berger { points, samples, .. } => {
                at_least("points", *points, 1)?;
                at_least("samples", *samples, 2)?;
            }
            Command::Product { grid, tol, .. } => {
                at_least("grid", *grid, 1)?;
                positive("tol", *tol)?;
            }
            Command::Curvature { .. } => {}
        }
        Ok(Self { command: cli.command, format: cli.format, out: cli.out })
    }
}

/// Top-level JSON document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report<P, R> {
    pub schema: u32,
    pub command: String,
    pub params: P,
    pub results: R,
    pub pass: bool,
}

impl<P, R> Report<P, R> {
    pub fn new(command: &str, params: P, results: R, pass: bool) -> Self {
        Self { schema: SCHEMA_VERSION, command: command.to_string(), params, results, pass }
    }
}

/// A finished command: the encoded report and its verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub body: String,
    pub pass: bool,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.pass {
            0
        } else {
            EXIT_FAIL
        }
    }
}

pub(crate) fn encode_json<P: Serialize, R: Serialize>(report: &Report<P, R>) -> Result<String, CliError> {
    let mut text = serde_json::to_string_pretty(report).map_err(|e| CliError::Encode(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

pub(crate) fn encode_csv<S: Serialize>(rows: impl IntoIterator<Item = S>) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).map_err(|e| CliError::Encode(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Encode(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Encode(e.to_string()))
}

/// Runs a validated command and returns the encoded report.
pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    commands::dispatch(cfg)
}

/// Runs and writes the report to `--out` or stdout.
pub fn execute(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let outcome = run(cfg)?;
    match &cfg.out {
        Some(path) => std::fs::write(path, &outcome.body)?,
        None => std::io::stdout().lock().write_all(outcome.body.as_bytes())?,
    }
    Ok(outcome)
}
