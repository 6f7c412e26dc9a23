//! Command-line front end. The only part of the crate that touches files,
//! environment variables or SI units.

mod commands;
pub mod config;
pub mod table;

pub use config::{ConfigError, RunConfig, Units, CONFIG_DIR_ENV};
pub use table::{Cell, Table};

use crate::modes::{CubicError, StateError};
use crate::quadrature::QuadratureError;
use crate::residual::Scheme;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::io::Write;
use std::path::PathBuf;

/// Version of the JSON report layout.
pub const SCHEMA: u32 = 1;

pub mod exit {
    pub const OK: i32 = 0;
    /// I/O failure writing the report.
    pub const IO: i32 = 1;
    pub const CONFIG: i32 = 2;
    pub const POLE: i32 = 3;
    pub const RESIDUAL: i32 = 4;
    pub const QUADRATURE: i32 = 5;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScanAxis {
    H,
    E0,
    Lambda,
    Tau,
    N,
}

#[derive(Debug, Parser)]
#[command(
    name = "rotdirac",
    version,
    about = "Dirac states in a rotating field: frame transformation, roots, residuals, expectations"
)]
pub struct Cli {
    /// JSON run configuration.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Directory searched for the config and for default.json.
    #[arg(long, global = true, env = CONFIG_DIR_ENV, value_name = "DIR")]
    pub config_dir: Option<PathBuf>,
    #[arg(long, global = true, value_name = "N")]
    pub seed: Option<u64>,
    /// Residual tolerance for verify, pole tolerance for roots.
    #[arg(long, global = true, value_name = "X")]
    pub tolerance: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Map events between the resting and the rotating frame.
    Transform {
        /// Treat the events as rotating-frame coordinates.
        #[arg(long)]
        inverse: bool,
        /// Random events per constancy check.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Real roots of the characteristic equation.
    Roots,
    /// Substitute the configured state into the Dirac equation.
    Verify {
        #[arg(long)]
        scheme: Option<Scheme>,
        /// Number of random events.
        #[arg(long)]
        points: Option<usize>,
        /// Use the massless prefactor without its exponential factor.
        #[arg(long)]
        strict_prefactor: bool,
        /// Relative change applied to the energy before substitution.
        #[arg(long)]
        perturb_energy: Option<f64>,
        /// Include every sampled event in the report.
        #[arg(long)]
        records: bool,
    },
    /// Cross-section averages by quadrature against closed forms.
    Expect {
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        z: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        t: f64,
    },
    /// Sweep one parameter.
    Scan {
        #[arg(long, value_enum)]
        axis: ScanAxis,
        #[arg(long, allow_hyphen_values = true)]
        from: f64,
        #[arg(long, allow_hyphen_values = true)]
        to: f64,
        /// Number of points; ignored for the integer `n` axis.
        #[arg(long, default_value_t = 11)]
        steps: usize,
        /// Geometric spacing.
        #[arg(long)]
        log: bool,
    },
    /// Rank all sign conventions by Dirac residual.
    Audit {
        #[arg(long)]
        points: Option<usize>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Transform { .. } => "transform",
            Command::Roots => "roots",
            Command::Verify { .. } => "verify",
            Command::Expect { .. } => "expect",
            Command::Scan { .. } => "scan",
            Command::Audit { .. } => "audit",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn new(code: i32, message: impl Into<String>) -> Self {
        CliError { code, message: message.into() }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::new(exit::CONFIG, e.to_string())
    }
}

impl From<StateError> for CliError {
    fn from(e: StateError) -> Self {
        let code = match e {
            StateError::OnPole(_) | StateError::Cubic(CubicError::PoleProximity { .. }) => exit::POLE,
            _ => exit::CONFIG,
        };
        CliError::new(code, e.to_string())
    }
}

impl From<QuadratureError> for CliError {
    fn from(e: QuadratureError) -> Self {
        CliError::new(exit::QUADRATURE, e.to_string())
    }
}

/// What a command produced: a JSON result, the same data as a table, and the
/// exit code to report after writing.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub result: serde_json::Value,
    pub table: Table,
    pub code: i32,
    /// Printed to stderr after the report.
    pub message: Option<String>,
}

#[derive(Serialize)]
struct Envelope<'a> {
    schema: u32,
    command: &'a str,
    seed: u64,
    config: &'a RunConfig,
    result: &'a serde_json::Value,
}

/// Load the configuration and apply flag overrides.
pub fn load_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let path = config::locate(cli.config.as_deref(), cli.config_dir.as_deref())?;
    let mut cfg = match path {
        Some(p) => RunConfig::load(&p)?,
        None => RunConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.verify.seed = s;
    }
    if let Some(t) = cli.tolerance {
        cfg.verify.tolerance = t;
    }
    if let Some(f) = cli.format {
        cfg.output.format = Some(format_name(f).to_string());
    }
    if let Some(p) = &cli.out {
        cfg.output.path = Some(p.clone());
    }
    Ok(cfg)
}

fn format_name(f: Format) -> &'static str {
    match f {
        Format::Json => "json",
        Format::Csv => "csv",
    }
}

fn output_format(cfg: &RunConfig) -> Result<Format, CliError> {
    match cfg.output.format.as_deref() {
        None | Some("json") => Ok(Format::Json),
        Some("csv") => Ok(Format::Csv),
        Some(other) => Err(CliError::new(exit::CONFIG, format!("unknown output format {other:?} (json or csv)"))),
    }
}

/// Render a finished command in the configured format.
pub fn render(command: &str, cfg: &RunConfig, outcome: &Outcome) -> Result<String, CliError> {
    Ok(match output_format(cfg)? {
        Format::Csv => outcome.table.to_csv(),
        Format::Json => {
            let env = Envelope { schema: SCHEMA, command, seed: cfg.verify.seed, config: cfg, result: &outcome.result };
            let mut s = serde_json::to_string_pretty(&env).map_err(|e| CliError::new(exit::IO, e.to_string()))?;
            s.push('\n');
            s
        }
    })
}

/// Run one invocation and return the report text with its exit code.
pub fn execute(cli: &Cli) -> Result<(String, Outcome, RunConfig), CliError> {
    let cfg = load_config(cli)?;
    output_format(&cfg)?;
    let outcome = commands::dispatch(&cli.command, &cfg)?;
    let text = render(cli.command.name(), &cfg, &outcome)?;
    Ok((text, outcome, cfg))
}

/// Entry point used by the binary; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    match execute(&cli) {
        Ok((text, outcome, cfg)) => {
            let written = match &cfg.output.path {
                Some(p) => std::fs::write(p, &text).map_err(|e| format!("cannot write {}: {e}", p.display())),
                None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string()),
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return exit::IO;
            }
            if let Some(m) = outcome.message {
                eprintln!("{m}");
            }
            outcome.code
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}
