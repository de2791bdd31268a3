use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ringchain::{run_command, Command, RunError, ScenarioConfig};

#[derive(Parser)]
#[command(name = "ringchain", version, about = "Spectra of magnetic ring chains")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Band structure in the search window.
    Bands(Common),
    /// Band structure and gap eigenvalues.
    Solve(Common),
    /// Dispersion table on a momentum grid.
    Dispersion(Common),
    /// Gap eigenvalues checked against the finite-difference oracle.
    OracleCompare(Common),
    /// Monodromy traces sampled in the gap intersection of a periodic perturbation.
    SaxonHutner(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    #[arg(long, default_value = ".")]
    out: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    threads: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, common) = match cli.command {
        Cmd::Bands(c) => (Command::Bands, c),
        Cmd::Solve(c) => (Command::Solve, c),
        Cmd::Dispersion(c) => (Command::Dispersion, c),
        Cmd::OracleCompare(c) => (Command::OracleCompare, c),
        Cmd::SaxonHutner(c) => (Command::SaxonHutner, c),
    };
    if let Some(n) = common.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(1);
        }
    }
    let result = ScenarioConfig::from_path(&common.config)
        .map_err(RunError::from)
        .and_then(|cfg| run_command(command, &cfg, &common.out, common.seed));
    match result {
        Ok(out) => {
            for f in out.files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
