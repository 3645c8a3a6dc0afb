//! Command-line driver: loads a symbol pair, runs estimators, Carleson
//! reports or the verification suites, and writes one JSON document per
//! command plus CSV traces.
//!
//! Exit codes: 0 success, 1 flagged mathematical inconsistency or failed
//! suite, 2 usage or configuration error.

pub mod commands;
pub mod output;
pub mod verify;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use commands::{Failure, JobConfig};

#[derive(Debug, Parser)]
#[command(name = "hpball", version, about = "Weighted composition operators between Hardy spaces of the unit ball")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the property suites; exit 0 iff every case passes.
    Verify(VerifyArgs),
    /// Essential-norm estimate for the (p, q) regime.
    Essnorm(JobArgs),
    /// Carleson equivalence report for H^p -> H^q, p <= q.
    Carleson(JobArgs),
    /// Boundedness classifier for H^p -> H^inf.
    Bounded(JobArgs),
    /// Every applicable regime for one pair, with cross-regime checks.
    Report(JobArgs),
}

fn exponent(text: &str) -> Result<f64, String> {
    hpball::estimators::exponent::parse(text)
        .filter(|x| *x > 0.0)
        .ok_or_else(|| format!("expected a positive number or `inf`, got {text:?}"))
}

#[derive(Debug, Clone, Args)]
pub struct JobArgs {
    /// Symbol-pair JSON file, or a built-in pair name.
    #[arg(long, default_value = "identity")]
    pub pair: String,
    #[arg(long, value_parser = exponent, default_value = "inf")]
    pub p: f64,
    #[arg(long, value_parser = exponent, default_value = "2")]
    pub q: f64,
    /// Boundary nodes: circle points for n = 1, Monte Carlo samples otherwise.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output directory; the JSON document goes to stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    pub schedule_eps: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    pub schedule_delta: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    pub schedule_h: Option<Vec<f64>>,
    /// Radii of the Berezin boundary trace.
    #[arg(long, value_delimiter = ',')]
    pub radii: Option<Vec<f64>>,
    /// Intermediate exponent of the interpolation upper bound (q < r).
    #[arg(long)]
    pub r: Option<f64>,
    /// Norm of the Szego projection on L^q, required for the interpolation bound when q != 2.
    #[arg(long)]
    pub projection_norm: Option<f64>,
    /// Base directions of the staged boundary search.
    #[arg(long, default_value_t = 256)]
    pub directions: usize,
    /// Refinement stages of the staged boundary search.
    #[arg(long, default_value_t = 6)]
    pub stages: u32,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Dimensions to test.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub dims: Vec<usize>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Replace every numeric suite tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let outcome = match cli.command {
        Command::Verify(args) => verify::cmd_verify(&args),
        Command::Essnorm(args) => commands::cmd_essnorm(&args),
        Command::Carleson(args) => commands::cmd_carleson(&args),
        Command::Bounded(args) => commands::cmd_bounded(&args),
        Command::Report(args) => commands::cmd_report(&args),
    };
    match outcome {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("error: {failure}");
            failure.exit_code()
        }
    }
}
