use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use mcac::cli;

/// Conserved Allen-Cahn dynamics for N-component mixtures.
#[derive(Parser)]
#[command(name = "mcac", version, about)]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one configured experiment.
    Run {
        /// Experiment configuration file.
        #[arg(long)]
        config: PathBuf,
        /// Override a configuration value, e.g. --set solver.dt=5e-4
        /// (repeatable).
        #[arg(long = "set", value_name = "KEY=VALUE", value_parser = parse_kv)]
        set: Vec<(String, String)>,
        /// Output directory (overrides [output] dir).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a seeded property suite.
    Verify {
        /// simplex | potential | discretization | scheme | lemmas | all
        suite: String,
    },
    /// Rerun one experiment across regularization strengths.
    SweepEpsilon {
        #[arg(long)]
        config: PathBuf,
        #[arg(long = "set", value_name = "KEY=VALUE", value_parser = parse_kv)]
        set: Vec<(String, String)>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Comma-separated list, e.g. --epsilons 1e-1,1e-2,1e-3
        #[arg(long, value_delimiter = ',', required = true)]
        epsilons: Vec<f64>,
    },
}

fn parse_kv(raw: &str) -> Result<(String, String), String> {
    raw.split_once('=')
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .ok_or_else(|| format!("expected KEY=VALUE, got '{raw}'"))
}

fn main() -> ExitCode {
    let args = Args::parse();
    let code = match args.command {
        Command::Run { config, set, out } => cli::cmd_run(&config, &set, out.as_deref()),
        Command::Verify { suite } => cli::cmd_verify(&suite),
        Command::SweepEpsilon {
            config,
            set,
            out,
            epsilons,
        } => cli::cmd_sweep_epsilon(&config, &set, &epsilons, out.as_deref()),
    };
    ExitCode::from(code as u8)
}
