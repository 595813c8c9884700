//! `pbbf`: runs the convergence, BER and tracking experiments from a JSON
//! configuration and writes CSV tables.
//!
//! Exit status: 0 on success, 1 on usage or configuration errors, 2 on
//! runtime errors.

mod commands;
mod oracle_check;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "pbbf", version, about = "One-bit-feedback relay beamforming simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Normalized-SNR trajectories and the gap distribution.
    Convergence(RunArgs),
    /// BER versus nominal SNR for batch and adaptive schemes.
    Ber(RunArgs),
    /// BER versus normalized Doppler in the realistic scenario.
    Tracking(RunArgs),
    /// Checks the closed-form designs against random search.
    OracleCheck(OracleArgs),
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Experiment configuration (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Master seed; overrides the configuration.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, default_value = "results")]
    out: PathBuf,
    /// Overwrite existing result files.
    #[arg(long)]
    force: bool,
}

#[derive(Debug, Args)]
struct OracleArgs {
    /// Optional configuration providing the network (defaults otherwise).
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Random channels to test.
    #[arg(long, default_value_t = 200)]
    channels: usize,
    /// Random candidate vectors per channel.
    #[arg(long, default_value_t = 10_000)]
    candidates: usize,
}

/// Error with the exit status it maps to.
#[derive(Debug)]
pub enum Failure {
    Config(anyhow::Error),
    Runtime(anyhow::Error),
}

impl Failure {
    fn report(&self) -> ExitCode {
        match self {
            Failure::Config(e) => {
                eprintln!("error: {e:#}");
                ExitCode::from(1)
            }
            Failure::Runtime(e) => {
                eprintln!("error: {e:#}");
                ExitCode::from(2)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Convergence(a) => commands::run(commands::Experiment::Convergence, &a),
        Command::Ber(a) => commands::run(commands::Experiment::Ber, &a),
        Command::Tracking(a) => commands::run(commands::Experiment::Tracking, &a),
        Command::OracleCheck(a) => oracle_check::run(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => f.report(),
    }
}
