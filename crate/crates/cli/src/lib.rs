//! Batch front end for the Fréchet bounds engine and max-plus residuation.
//!
//! Exit codes: 0 success, 1 domain failure (infeasible marginals, a
//! non-member table, a failed property suite), 2 input error.

pub mod commands;
pub mod input;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use frechet_core::numeric::DEFAULT_EPSILON;
use frechet_core::{Error, NumericMode};

#[derive(Debug, Parser)]
#[command(name = "frechet", version, about = "Fréchet bounds for contingency tables via max-plus residuation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Subcommand, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Upper and lower bounds (cumulative arrays and tables) for two marginals.
    Bounds,
    /// Membership and sandwich report for a candidate table.
    Check,
    /// Random feasible tables with per-table sandwich verdicts.
    Sample,
    /// Run the randomized self-verification suites.
    Verify,
    /// Greatest subsolution A\B (left) or A/B (right) of two tropical matrices.
    Residuate,
}

#[derive(Debug, Args, Clone)]
pub struct CommonArgs {
    /// Input file; standard input when omitted.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,

    /// Output file; standard output when omitted.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,

    #[arg(long, value_enum, default_value_t = Mode::Exact, global = true)]
    pub mode: Mode,

    /// Absolute tolerance in float mode.
    #[arg(long, default_value_t = DEFAULT_EPSILON, global = true)]
    pub epsilon: f64,

    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Number of samples (sample) or iterations per suite (verify).
    #[arg(long, global = true)]
    pub count: Option<usize>,

    /// Largest category count drawn by verify.
    #[arg(long, global = true)]
    pub max_dim: Option<usize>,

    #[arg(long, value_enum, default_value_t = Side::Left, global = true)]
    pub side: Side,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exact,
    Float,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Side {
    Left,
    Right,
}

/// Resolved settings for a single invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub mode: NumericMode,
    pub seed: Option<u64>,
    pub count: Option<usize>,
    pub max_dim: Option<usize>,
    pub side: Side,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self, CliError> {
        let c = cli.common;
        let mode = match c.mode {
            Mode::Exact => NumericMode::Exact { scale: 1 },
            Mode::Float => {
                if !(c.epsilon.is_finite() && c.epsilon >= 0.0) {
                    return Err(CliError::Input(format!("invalid epsilon {}", c.epsilon)));
                }
                NumericMode::Float { epsilon: c.epsilon }
            }
        };
        if c.count == Some(0) && cli.command == Command::Sample {
            return Err(CliError::Input("--count must be positive".into()));
        }
        Ok(Self {
            command: cli.command,
            input: c.input,
            output: c.output,
            format: c.format,
            mode,
            seed: c.seed,
            count: c.count,
            max_dim: c.max_dim,
            side: c.side,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Malformed input, shape errors, unreadable files. Exit 2.
    Input(String),
    /// Infeasible marginals, non-members, failed suites. Exit 1.
    Domain(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(_) => 1,
            CliError::Input(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(msg) => write!(f, "input error: {msg}"),
            CliError::Domain(msg) => f.write_str(msg),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Infeasible { .. } | Error::NotAMember | Error::NegativeCell { .. } => {
                CliError::Domain(e.to_string())
            }
            _ => CliError::Input(e.to_string()),
        }
    }
}
