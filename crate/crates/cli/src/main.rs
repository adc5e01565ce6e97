//! `upplane`: uncertainty–perception bounds, Gaussian verification sweeps,
//! estimator front ends and dataset evaluation.

// `!(x > 0.0)` comparisons deliberately reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::Settings;

#[derive(Debug, Parser)]
#[command(name = "upplane", version, about = "Uncertainty–perception tradeoff toolkit")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Seed for every random draw; echoed into all outputs.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory (created if missing).
    #[arg(long, global = true, env = "UPPLANE_OUT_DIR")]
    out_dir: Option<PathBuf>,
    /// JSON configuration file; command-line flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Perception divergence: renyi-half or hellinger.
    #[arg(long, global = true)]
    divergence: Option<String>,
    /// Omit the generation timestamp from SVG output.
    #[arg(long, global = true)]
    no_timestamp: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// η curves and UP-plane region bounds.
    Bounds(commands::BoundsArgs),
    /// Numerical constrained UP solutions against the analytic optimum.
    VerifyGaussian(commands::VerifyGaussianArgs),
    /// Closed-form scalar example against a brute-force grid oracle.
    VerifyExample1(commands::VerifyExample1Args),
    /// Kozachenko–Leonenko entropy and entropy power of a sample set.
    Entropy(commands::EntropyArgs),
    /// KDE Rényi-½ divergence and Hellinger distance between two sample sets.
    Divergence(commands::DivergenceArgs),
    /// Evaluate restoration algorithms on a dataset and place them on the plane.
    Evaluate(commands::EvaluateArgs),
    /// Write the synthetic Gaussian restoration dataset.
    MakeFixture(commands::FixtureArgs),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = Settings::resolve(&cli.global).and_then(|settings| match &cli.command {
        Command::Bounds(a) => commands::bounds(&settings, a),
        Command::VerifyGaussian(a) => commands::verify_gaussian(&settings, a),
        Command::VerifyExample1(a) => commands::verify_example1(&settings, a),
        Command::Entropy(a) => commands::entropy(&settings, a),
        Command::Divergence(a) => commands::divergence(&settings, a),
        Command::Evaluate(a) => commands::evaluate(&settings, a),
        Command::MakeFixture(a) => commands::make_fixture(&settings, a),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
