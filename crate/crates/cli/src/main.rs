//! `projconst`: command-line front end for projection constants of
//! hyperplanes in the space of bounded sequences.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use commands::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "projconst", version, about = "Projection constants and minimal projections onto hyperplanes of l-infinity")]
pub struct Cli {
    /// Solver tolerance.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,

    /// Output format (defaults to csv for `sweep`, json otherwise).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write the main output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Truncation levels used for gap sequences.
    #[arg(long, global = true, value_delimiter = ',', default_values_t = vec![10u64, 100, 1_000, 10_000])]
    pub levels: Vec<u64>,

    /// Seed for random sweeps.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Projection constant of ker f, by closed form and by the solver.
    Lambda {
        /// Functional as inline JSON or a path to a JSON file.
        functional: String,
    },
    /// Exact norm of the projection x -> x - <f, x> y.
    Norm {
        functional: String,
        /// Vector `{"y": [...], "t": .., "s": ..}` as inline JSON or a path.
        vector: String,
    },
    /// Hyperplane with the target constant and no minimal projection.
    Design {
        #[arg(long)]
        target: f64,
    },
    /// Re-check a certificate produced by `design`.
    Verify { certificate: String },
    /// Seeded formula-versus-solver sweep, or samples of the curve g(a).
    Sweep {
        /// Number of random instances (or curve samples).
        #[arg(long)]
        count: Option<usize>,
        /// Emit curve samples instead, e.g. `--curve n=4`.
        #[arg(long, value_parser = parse_curve)]
        curve: Option<usize>,
    },
    /// Truncation gaps evidencing that no minimal projection exists.
    Gaps { functional: String },
}

fn parse_curve(s: &str) -> Result<usize, String> {
    let v = s.strip_prefix("n=").unwrap_or(s);
    v.parse().map_err(|_| format!("expected n=<integer>, got {s:?}"))
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("PROJCONST_THREADS") else { return Ok(()) };
    let threads: usize = raw
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Malformed(format!("PROJCONST_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Internal(e.to_string()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match configure_threads().and_then(|()| commands::run(&cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(failure.exit_code())
        }
    }
}
