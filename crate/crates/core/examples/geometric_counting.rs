//! Number of eigenvalues below the spectrum when one ring is rescaled.
//! The count grows without bound for positive coupling as the ring grows.

use ringchain::gap_solvers::geometric_eigenvalues;
use ringchain::Background;
use std::f64::consts::PI;

fn main() -> ringchain::Result<()> {
    for alpha in [1.0, -1.0] {
        let bg = Background::new(alpha, 0.2);
        println!("alpha = {alpha}");
        for ell1 in [0.5, 1.0, 2.0, 3.0, 4.0, 6.0, 4.0 * PI, 8.0 * PI] {
            let (evs, count) = geometric_eigenvalues(&bg, ell1, 1)?;
            let lowest = evs.first().map(|e| format!("{:.8}", e.energy)).unwrap_or_default();
            println!("  ell1 = {ell1:>8.4}: {count} eigenvalue(s) {lowest}");
        }
    }
    Ok(())
}
