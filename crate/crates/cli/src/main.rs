//! Command-line front end: generation, spectral analysis, unconditionality
//! constants, weight splittings, witnesses, and the verification suite, all
//! over the JSON frame/system schemas.

mod commands;
mod io;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use framekit::split::{DEFAULT_SPLIT_MAX_ITERS, DEFAULT_SPLIT_TOL};
use framekit::unconditionality::DEFAULT_K1;

#[derive(Debug, Parser)]
#[command(
    name = "framekit",
    about = "Finite-frame multiplier analysis: Bessel bounds, unconditionality constants, weight splits, and quantitative-bound verification",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Table,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Spectral summary (eigenvalues, frame bounds, flatness) of a frame or
    /// of both frames of a multiplier system.
    Analyze {
        /// Frame or system JSON file.
        #[arg(long)]
        input: String,
        /// Output file; stdout when omitted.
        #[arg(long)]
        output: Option<String>,
        /// Accepted eigenpair residual relative to the operator norm.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
    },
    /// Unconditionality constant: exact sign enumeration up to the cutoff,
    /// randomized search with hill climbing beyond it.
    Constant {
        /// System JSON file.
        #[arg(long)]
        input: String,
        #[arg(long)]
        output: Option<String>,
        /// Random draws for the randomized path.
        #[arg(long, default_value_t = 200)]
        trials: usize,
        /// Seed for the randomized path.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
    },
    /// Explicit, optimal, and unit weight splits side by side.
    Split {
        /// System JSON file.
        #[arg(long)]
        input: String,
        #[arg(long)]
        output: Option<String>,
        /// Relative stall tolerance of the optimizer.
        #[arg(long, default_value_t = DEFAULT_SPLIT_TOL)]
        tol: f64,
        /// Iteration budget of the optimizer.
        #[arg(long, default_value_t = DEFAULT_SPLIT_MAX_ITERS)]
        max_iters: usize,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
    },
    /// Probabilistic lower-bound witness for an equi-norm system.
    Witness {
        /// System JSON file.
        #[arg(long)]
        input: String,
        #[arg(long)]
        output: Option<String>,
        /// Khintchine constant to certify against.
        #[arg(long, default_value_t = DEFAULT_K1)]
        k1: f64,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
    },
    /// Write a generated frame or system as JSON.
    Generate {
        /// One of: harmonic_funtf, random_gaussian, example_basis_pair,
        /// tight_equinorm_pair, replicated.
        #[arg(long)]
        kind: String,
        /// Number of vectors.
        #[arg(long)]
        n: usize,
        /// Ambient dimension (defaults to n).
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Uniform scaling of all vectors.
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
        #[arg(long)]
        output: Option<String>,
    },
    /// Run one named checker or the whole suite, either on a provided
    /// system or on generated instances, and report pass/fail per theorem.
    /// Exits nonzero iff any check fails.
    Verify {
        /// System JSON file to check; generated instances when omitted.
        #[arg(long)]
        input: Option<String>,
        /// Check name or "all".
        #[arg(long, default_value = "all")]
        suite: String,
        /// Seed list such as "1..20" or "1,4,9" (generated instances only).
        #[arg(long, default_value = "1..5")]
        seeds: String,
        /// Vectors per generated instance.
        #[arg(long, default_value_t = 8)]
        n: usize,
        /// Ambient dimension of generated instances.
        #[arg(long, default_value_t = 4)]
        m: usize,
        /// Khintchine constant used by the bound factors.
        #[arg(long, default_value_t = DEFAULT_K1)]
        k1: f64,
        /// Absolute tolerance on inequality margins.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Trials for randomized constants beyond the enumeration cutoff.
        #[arg(long, default_value_t = 200)]
        trials: usize,
        /// Seed for randomized constants.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        output: Option<String>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
