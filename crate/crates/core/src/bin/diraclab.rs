use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use diraclab::experiment::{self, Experiment, ExperimentConfig};

#[derive(Parser)]
#[command(
    name = "diraclab",
    version,
    about = "Free Dirac field experiments on a periodic lattice"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Trajectory observables, conservation and continuity
    Evolve(RunArgs),
    /// Packet width sweep and spin diagnostics
    Packet(RunArgs),
    /// Electromagnetic analog: energy identity and photon numbers
    Em(RunArgs),
    /// Fock-space operator identities and spectra
    Fock(RunArgs),
    /// Grassmann lift identities
    Grassmann(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// TOML config file
    #[arg(long)]
    config: PathBuf,
    /// Output directory
    #[arg(long)]
    out: PathBuf,
    /// Exit with status 3 when a tolerance is breached
    #[arg(long)]
    assert: bool,
    /// Override the config seed
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (wanted, args) = match cli.command {
        Command::Evolve(a) => (Experiment::Evolve, a),
        Command::Packet(a) => (Experiment::Packet, a),
        Command::Em(a) => (Experiment::Em, a),
        Command::Fock(a) => (Experiment::Fock, a),
        Command::Grassmann(a) => (Experiment::Grassmann, a),
    };
    let result = ExperimentConfig::load(&args.config, args.seed).and_then(|cfg| {
        if cfg.experiment != wanted {
            return Err(experiment::ExperimentError::Config(format!(
                "config is for `{}`, not `{}`",
                cfg.experiment.name(),
                wanted.name()
            )));
        }
        experiment::run(&cfg)
    });
    let report = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    if let Err(e) = report.write(&args.out) {
        eprintln!("error: {e}");
        return ExitCode::from(e.exit_code() as u8);
    }
    for b in &report.breaches {
        eprintln!("breach: {b}");
    }
    if args.assert && !report.breaches.is_empty() {
        return ExitCode::from(3);
    }
    ExitCode::SUCCESS
}
