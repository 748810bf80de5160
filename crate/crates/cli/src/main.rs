use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand as ClapSubcommand};
use graphrep_cli::commands;
use graphrep_cli::config::{schema_json, sha256_hex, ExperimentConfig, Subcommand};
use graphrep_cli::THREADS_ENV;

/// Exit codes: 0 all checks pass, 1 an identity check failed, 2 usage, config
/// or cap error.
#[derive(Parser)]
#[command(name = "graphrep", version, about = "Exact checks and Monte Carlo scans for graphical representations of the Ising model")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(ClapSubcommand)]
enum Command {
    /// Run the exact identity suite on a small host.
    EnumerateCheck { config: PathBuf },
    /// Estimate torus wrap-around observables across sizes.
    TorusScan { config: PathBuf },
    /// Compare free and wired boundary conditions across box sizes.
    MixingScan { config: PathBuf },
    /// Dump raw samples.
    Sample { config: PathBuf },
    /// Print the JSON schema of experiment configs.
    Schema,
}

fn run(cmd: Command) -> Result<bool> {
    let (which, path) = match cmd {
        Command::Schema => {
            print!("{}", schema_json());
            return Ok(true);
        }
        Command::EnumerateCheck { config } => (Subcommand::EnumerateCheck, config),
        Command::TorusScan { config } => (Subcommand::TorusScan, config),
        Command::MixingScan { config } => (Subcommand::MixingScan, config),
        Command::Sample { config } => (Subcommand::Sample, config),
    };
    let bytes = std::fs::read(&path).with_context(|| format!("reading {}", path.display()))?;
    let text = std::str::from_utf8(&bytes).context("config is not UTF-8")?;
    let cfg = ExperimentConfig::parse(text, which)?;
    let hash = sha256_hex(&bytes);
    match which {
        Subcommand::EnumerateCheck => commands::enumerate_check(&cfg, &hash),
        Subcommand::TorusScan => commands::torus_scan(&cfg, &hash),
        Subcommand::MixingScan => commands::mixing_scan(&cfg, &hash),
        Subcommand::Sample => commands::sample(&cfg, &hash),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        match v.parse::<usize>() {
            Ok(n) if n > 0 => {
                rayon::ThreadPoolBuilder::new().num_threads(n).build_global().ok();
            }
            _ => {
                eprintln!("error: {THREADS_ENV} must be a positive integer");
                return ExitCode::from(2);
            }
        }
    }
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
