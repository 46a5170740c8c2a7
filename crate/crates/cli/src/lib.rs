//! The `incompat` command-line tool.
//!
//! [`run`] parses arguments, executes one subcommand and returns the exit
//! code: 0 on success, 1 when `--assert-compatible` finds an incompatible
//! pair, 2 on usage errors, 3 when a system or event fails validation.

mod commands;
pub mod format;
pub mod montecarlo;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

pub use montecarlo::{monte_carlo_estimate, McEstimate};

/// Environment variable overriding the default quantum tolerance.
pub const TOLERANCE_ENV: &str = "INCOMPAT_TOLERANCE";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Validation(String),
    #[error("output error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 2,
            CliError::Validation(_) => 3,
        }
    }
}

impl From<incompat_core::Error> for CliError {
    fn from(e: incompat_core::Error) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<incompat_core::catalog::CatalogError> for CliError {
    fn from(e: incompat_core::catalog::CatalogError) -> Self {
        CliError::Validation(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "incompat",
    version,
    about = "Exact compatibility analysis of classical measurement systems"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct SystemArgs {
    /// Built-in system
    #[arg(long, value_parser = incompat_core::catalog::BUILTIN_NAMES)]
    pub builtin: Option<String>,
    /// JSON system document
    #[arg(long, value_name = "FILE")]
    pub system: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Criteria for value pairs, repeatability and sharpness
    Analyze {
        #[command(flatten)]
        system: SystemArgs,
        /// Value pair `P,Q` such as `Face:King,Suit:Spades`; repeatable.
        /// Without it every pair of values of distinct variables is checked.
        #[arg(long, value_name = "P,Q")]
        pairs: Vec<String>,
        /// Quantify over every non-empty sub-pool instead of reachable ones
        #[arg(long)]
        all_subpools: bool,
        #[arg(long)]
        json: bool,
        /// Exit with status 1 if any analysed pair fails order exchange
        #[arg(long)]
        assert_compatible: bool,
    },
    /// Exact probability of an event sequence
    Prob {
        #[command(flatten)]
        system: SystemArgs,
        /// Preparation filter applied to the initial state
        #[arg(long, value_name = "EVENTS", default_value = "")]
        prep: String,
        #[arg(long, value_name = "EVENTS")]
        seq: String,
        #[arg(long)]
        json: bool,
    },
    /// Interference between a coarse value and the values it pools
    Interfere {
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long, value_name = "EVENTS", default_value = "")]
        prep: String,
        #[arg(long, value_name = "EVENT")]
        coarse: String,
        /// Defaults to the coarse value's block
        #[arg(long, value_name = "EVENTS")]
        fine: Option<String>,
        /// Omit for a single measurement
        #[arg(long, value_name = "EVENT")]
        follow: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Projector commutativity versus the three criteria
    Quantum {
        #[arg(long, value_name = "LIST", default_value = "2,3,4,5,6")]
        dims: String,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 100)]
        rho_samples: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, env = TOLERANCE_ENV)]
        tolerance: Option<f64>,
        #[arg(long)]
        json: bool,
    },
    /// Monte Carlo estimate next to the exact value
    Simulate {
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long, value_name = "EVENTS", default_value = "")]
        prep: String,
        #[arg(long, value_name = "EVENTS")]
        seq: String,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Random table systems separating the criteria
    Search {
        #[arg(long, default_value_t = 3)]
        configs: usize,
        /// Variables as `NAME:VALUES,...`
        #[arg(long, default_value = "A:2,B:2")]
        vars: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
}

/// Runs the tool on `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    2
                }
            };
        }
    };
    match commands::execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if let CliError::Usage(_) = e {
                let _ = writeln!(err, "run `incompat --help` for usage");
            }
            e.exit_code()
        }
    }
}
