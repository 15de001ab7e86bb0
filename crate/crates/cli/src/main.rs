//! `tablemorph` batch frontend.
//!
//! Exit codes: 0 success, 1 runtime failure, 2 configuration error.

mod config;
mod dataset;
mod evaluate;
mod explore;
mod gtgen;
mod sample;
mod split;
mod stats;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::config::RunConfig;

#[derive(Parser, Debug)]
#[command(name = "tablemorph", version, about = "Structural augmentation for table images")]
struct Cli {
    #[command(flatten)]
    common: CommonArgs,
    #[command(subcommand)]
    command: Command,
}

/// Flags shared by every command. They override the config file.
#[derive(Args, Debug, Default)]
pub struct CommonArgs {
    /// TOML configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Dataset manifest (JSON list of tables).
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,
    /// Output file or directory, depending on the command.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Spread of the category Gaussian, in bins.
    #[arg(long, global = true)]
    pub sigma: Option<f64>,
    /// Probability of drawing an augmented node instead of the original.
    #[arg(long, global = true)]
    pub p_augment: Option<f64>,
    /// Overlap threshold T for evaluation.
    #[arg(long, global = true)]
    pub threshold: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Assign train/test/val splits, keeping tables of one page together.
    Split(split::SplitArgs),
    /// Precompute augmentation trees for every training table.
    Explore(explore::ExploreArgs),
    /// Draw augmented training samples from precomputed trees.
    Sample(sample::SampleArgs),
    /// Render pixel-level row and column separator masks.
    Gtgen(gtgen::GtgenArgs),
    /// Score predicted structures against ground truth.
    Evaluate(evaluate::EvaluateArgs),
    /// Print split sizes and the category histogram.
    Stats(stats::StatsArgs),
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let cfg = RunConfig::resolve(&cli.common)?;
    match cli.command {
        Command::Split(a) => split::run(&cfg, &a),
        Command::Explore(a) => explore::run(&cfg, &a),
        Command::Sample(a) => sample::run(&cfg, &a),
        Command::Gtgen(a) => gtgen::run(&cfg, &a),
        Command::Evaluate(a) => evaluate::run(&cfg, &a),
        Command::Stats(a) => stats::run(&cfg, &a),
    }
}

fn is_config_error(e: &anyhow::Error) -> bool {
    e.chain()
        .any(|c| matches!(c.downcast_ref::<tablemorph::Error>(), Some(tablemorph::Error::Config(_))))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if is_config_error(&e) {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
