//! Scenario runner behind the `wavelab` binary.
//!
//! Every subcommand reads a [`RunConfig`], writes its artifacts into the
//! output directory together with the effective configuration
//! (`config.txt`), and maps failures onto fixed exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 1 | I/O failure or a failed `verify` check |
//! | 2 | configuration error |
//! | 3 | numerical failure |
//! | 4 | grid resolution precondition failure |

mod commands;
pub mod config;
mod verify;

use std::fmt;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::error::Error;

pub use config::{ConfigError, RunConfig};
pub use verify::{run_checks, CheckOutcome};

#[derive(Debug, Parser)]
#[command(name = "wavelab", version, about = "1-D wave equation laboratory")]
pub struct Cli {
    /// Flat `key = value` configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Output directory (created if missing).
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,

    /// Overrides the `seed` key.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// `key=value` override applied after the config file; repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,

    /// Test hook: `dispersion` or `nonfinite`.
    #[arg(long, global = true, hide = true)]
    pub inject_fault: Option<Fault>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Fault {
    /// Perturbs the dispersion used by the plane-wave check of `verify`.
    Dispersion,
    /// Plants a NaN in the initial field of `evolve`.
    Nonfinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Scan omega(k), group velocity, (p, E) and the non-relativistic gap.
    Dispersion,
    /// Evolve an initial field and write snapshots plus a diagnostics summary.
    Evolve,
    /// Compare Klein-Gordon and Schrodinger evolution along a ladder of c.
    Nrlimit,
    /// Uncertainty bound minimum and imaginary-time ground state.
    Oscillator,
    /// Run the built-in invariant checks.
    Verify,
}

#[derive(Debug)]
pub enum CliError {
    Config(ConfigError),
    Model(Error),
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    Verify(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Verify(_) => 1,
            CliError::Config(_) => 2,
            CliError::Model(e) => match e {
                Error::NonFinite { .. }
                | Error::NoConvergence { .. }
                | Error::LinearSolveFailure(_)
                | Error::ZeroField => 3,
                Error::GridTooCoarse(_) => 4,
                _ => 2,
            },
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(e) => write!(f, "config error: {e}"),
            CliError::Model(e @ Error::GridTooCoarse(_)) => {
                write!(f, "{e}\nhint: raise n_points or length and rerun")
            }
            CliError::Model(e) => write!(f, "{e}"),
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
            CliError::Verify(name) => write!(f, "verify failed: first failing check `{name}`"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Model(e)
    }
}

/// Runs one parsed command line.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    if cli.command == Command::Verify {
        let outcomes = run_checks(cli.inject_fault);
        let mut stdout = String::new();
        for o in &outcomes {
            stdout.push_str(&o.line());
            stdout.push('\n');
        }
        print!("{stdout}");
        return match outcomes.iter().find(|o| !o.passed) {
            Some(first) => Err(CliError::Verify(first.name.to_string())),
            None => Ok(()),
        };
    }
    let cfg = RunConfig::load(cli.config.as_deref(), &cli.overrides, cli.seed)?;
    let out = commands::Output::create(&cli.out)?;
    out.write("config.txt", &cfg.to_text())?;
    match cli.command {
        Command::Dispersion => commands::dispersion(&cfg, &out),
        Command::Evolve => commands::evolve(&cfg, &out, cli.inject_fault),
        Command::Nrlimit => commands::nrlimit(&cfg, &out),
        Command::Oscillator => commands::oscillator(&cfg, &out),
        Command::Verify => unreachable!("handled above"),
    }
}
