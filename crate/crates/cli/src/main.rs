use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use evcomb_cli::{run, Options, Subcommand};

/// Combine statistical evidence across Bayesian inference bases.
#[derive(Debug, Parser)]
#[command(name = "evcomb", version)]
struct Args {
    /// TOML run configuration.
    #[arg(long)]
    config: PathBuf,

    /// Seed for every random draw; overrides the config.
    #[arg(long)]
    seed: Option<u64>,

    /// Output directory; overrides the config.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Operation to run; overrides the config.
    #[arg(long, value_enum)]
    subcommand: Option<Subcommand>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let options = Options { config: args.config, seed: args.seed, out: args.out, subcommand: args.subcommand };
    match run(&options) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
