mod analyze;
mod compare;
mod density;
mod error;
mod io;
mod params;
mod sample;

use clap::{Parser, Subcommand};
use std::process::ExitCode;

/// Densities, Monte Carlo runs and comparisons for rank-one non-Hermitian
/// deformations of random matrices.
///
/// Exit codes: 0 success, 2 usage or validation error, 3 numerical or domain
/// failure.
#[derive(Debug, Parser)]
#[command(name = "outlier-lab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate a model curve on a grid.
    Density(density::DensityArgs),
    /// Run a Monte Carlo experiment and write its statistics.
    Sample(sample::SampleArgs),
    /// Print derived constants as JSON.
    Analyze(analyze::AnalyzeArgs),
    /// Compare a sampled histogram with a tabulated density.
    Compare(compare::CompareArgs),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    let r = match cli.command {
        Command::Density(a) => density::run(a),
        Command::Sample(a) => sample::run(a),
        Command::Analyze(a) => analyze::run(a),
        Command::Compare(a) => compare::run(a),
    };
    match r {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("outlier-lab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
