//! Experiment driver: each subcommand reads a line-oriented `key = value`
//! config, runs the matching experiment, and writes CSV artifacts plus a
//! run manifest into the output directory.
//!
//! Exit codes: 0 on success, 2 when the config cannot be read or validated,
//! 3 when a solve fails or an `expect` declaration is violated.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use navier_schwarz::{
    parse_config, run_delta_star, run_grid_experiment, run_symbol_scan, run_transmission,
    run_two_subdomain, Error, ExperimentKind, Result, RunManifest,
};

#[derive(Parser)]
#[command(name = "navier-schwarz", version, about = "Schwarz methods for the 2D elastic Helmholtz problem")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Scan closed-form convergence factors over wavenumber
    Analyze(RunArgs),
    /// Critical overlap of the zeroth-order Taylor conditions, with verification scan
    DeltaStar(RunArgs),
    /// Two-subdomain waveguide: optimized stationary histories and an error snapshot
    SolveTwo(RunArgs),
    /// 4x4-subdomain square: RAS/ORAS, stationary and GMRES histories
    SolveGrid(RunArgs),
    /// Square with a stiff circular inclusion, four subdomains by bisection
    SolveTransmission(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Experiment config file (line-oriented `key = value` text)
    #[arg(long)]
    config: PathBuf,
    /// Directory for CSV artifacts and the run manifest (created if absent)
    #[arg(long)]
    out: PathBuf,
}

fn run(kind: ExperimentKind, args: &RunArgs) -> Result<RunManifest> {
    let text = fs::read_to_string(&args.config).map_err(|e| {
        Error::Config(format!("cannot read config '{}': {e}", args.config.display()))
    })?;
    let config = parse_config(&text, kind)?;
    match kind {
        ExperimentKind::SymbolScan => run_symbol_scan(&config, &args.out),
        ExperimentKind::DeltaStar => run_delta_star(&config, &args.out),
        ExperimentKind::TwoSubdomain => run_two_subdomain(&config, &args.out),
        ExperimentKind::Grid4x4 => run_grid_experiment(&config, &args.out),
        ExperimentKind::Transmission => run_transmission(&config, &args.out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, args) = match &cli.command {
        Command::Analyze(a) => (ExperimentKind::SymbolScan, a),
        Command::DeltaStar(a) => (ExperimentKind::DeltaStar, a),
        Command::SolveTwo(a) => (ExperimentKind::TwoSubdomain, a),
        Command::SolveGrid(a) => (ExperimentKind::Grid4x4, a),
        Command::SolveTransmission(a) => (ExperimentKind::Transmission, a),
    };
    match run(kind, args) {
        Ok(manifest) => {
            println!(
                "{}: wrote {} files to {}",
                manifest.kind,
                manifest.outputs.len(),
                args.out.display()
            );
            ExitCode::SUCCESS
        }
        Err(err @ Error::Config(_)) => {
            eprintln!("{err}");
            ExitCode::from(2)
        }
        Err(err) => {
            eprintln!("{err}");
            ExitCode::from(3)
        }
    }
}
