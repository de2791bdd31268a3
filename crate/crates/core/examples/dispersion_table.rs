//! Writes the dispersion table `k,E,xi,theta,flat` to stdout.
//!
//! Usage: `cargo run --example dispersion_table -- [alpha] [A] [k_max]`

use ringchain::config::DispersionConfig;
use ringchain::report::export_dispersion;
use ringchain::Background;

fn main() -> ringchain::Result<()> {
    let args: Vec<f64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let alpha = args.first().copied().unwrap_or(0.0);
    let field = args.get(1).copied().unwrap_or(1.0 / 3.0);
    let k_max = args.get(2).copied().unwrap_or(3.0);
    let grid = DispersionConfig {
        k_min: -1.0,
        k_max,
        k_step: 1e-2,
    };
    print!("{}", export_dispersion(&Background::new(alpha, field), &grid)?);
    Ok(())
}
