//! Runs a scenario file the way the command-line tool does and prints the
//! files it wrote. Usage: `cargo run --example run_config -- <config.json> [out_dir]`

use std::path::PathBuf;

use ringchain::{run_command, Command, ScenarioConfig};

const DEFAULT: &str = r#"{
  "background": {"alpha": 0.0, "A": 0.3333333333333333},
  "perturbation": {"type": "two_ring_field", "A1": 0.0, "A2": 0.0},
  "search": {"E_min": -10.0, "E_max": 10.0, "max_gap": 3}
}"#;

fn main() {
    let mut args = std::env::args().skip(1);
    let cfg = match args.next() {
        Some(path) => ScenarioConfig::from_path(path.as_ref()),
        None => ScenarioConfig::from_json(DEFAULT),
    };
    let out = args.next().map(PathBuf::from).unwrap_or_else(|| std::env::temp_dir().join("ringchain-run"));
    let result = cfg
        .map_err(Into::into)
        .and_then(|cfg| run_command(Command::Solve, &cfg, &out, 0));
    match result {
        Ok(run) => {
            for f in run.files {
                println!("{}", f.display());
            }
            for e in run.eigenvalues {
                println!("gap {} E = {:.12} ({})", e.gap_index, e.energy, e.method.as_str());
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
