use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cocycle_lab::scenario::Suite;
use cocycle_lab::{run_scenario, RunOptions};

/// Numerical checks of a two-cocycle on groups of symplectic maps.
#[derive(Parser)]
#[command(name = "cocycle-lab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the suite named in the scenario (or --suite).
    Run {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        suite: Option<Suite>,
    },
    /// Cocycle identity, basepoint and primitive changes, closed forms.
    Verify(Common),
    /// G over a grid of maps, as CSV.
    Table(Common),
    /// G against the Kahler area cocycle on the disk.
    Kahler(Common),
    /// Distortion report for a flow with two fixed points.
    Distortion(Common),
    /// Action functional checks for each Hamiltonian.
    Hamiltonian(Common),
}

#[derive(Args)]
struct Common {
    /// Scenario file (TOML).
    scenario: PathBuf,
    /// Quadrature tolerance, overriding the scenario.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Report path; defaults to `<name>.jsonl` (`<name>.csv` for tables).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print every record, not only failures.
    #[arg(short, long)]
    verbose: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (common, suite) = match cli.command {
        Command::Run { common, suite } => (common, suite),
        Command::Verify(c) => (c, Some(Suite::Verify)),
        Command::Table(c) => (c, Some(Suite::Table)),
        Command::Kahler(c) => (c, Some(Suite::Kahler)),
        Command::Distortion(c) => (c, Some(Suite::Distortion)),
        Command::Hamiltonian(c) => (c, Some(Suite::Hamiltonian)),
    };
    let threads = std::env::var("COCYCLE_LAB_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0);
    if let Some(n) = threads {
        // only fails if a pool already exists, which cannot happen here
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    let opts = RunOptions {
        suite,
        seed: common.seed,
        tol: common.tol,
        out: common.out,
        threads: rayon::current_num_threads(),
        verbose: common.verbose,
    };
    match run_scenario(&common.scenario, &opts) {
        Ok(outcome) => ExitCode::from(outcome.exit_code() as u8),
        Err(e) => {
            eprintln!("cocycle-lab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
