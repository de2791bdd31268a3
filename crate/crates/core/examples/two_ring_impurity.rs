//! Gap eigenvalues created by changing the flux through two adjacent rings,
//! and an existence map over the two perturbed fluxes.

use ringchain::gap_solvers::{characteristic_determinant, two_ring_eigenvalues, two_ring_exists};
use ringchain::{Background, ChainScenario, Energy, Perturbation};

fn main() -> ringchain::Result<()> {
    let bg = Background::new(0.0, 1.0 / 3.0);
    let (a1, a2) = (0.0, 0.0);
    let sc = ChainScenario::new(bg, Perturbation::TwoRingField { a1, a2 });
    for ev in two_ring_eigenvalues(&bg, a1, a2, 3)? {
        let det = characteristic_determinant(&sc, Energy::new(ev.energy)?)?;
        println!(
            "gap {}: E = {:.12}  residual {:.1e}  transfer determinant {:.1e}",
            ev.gap_index, ev.energy, ev.residual, det
        );
    }

    println!("\nexistence (A1 down, A2 across, '#' = eigenvalues exist):");
    let n = 20;
    for i in 0..n {
        let a1 = -0.5 + (i as f64 + 0.5) / n as f64;
        let row: String = (0..n)
            .map(|j| {
                let a2 = -0.5 + (j as f64 + 0.5) / n as f64;
                match two_ring_exists(&bg, a1, a2) {
                    Ok(true) => '#',
                    Ok(false) => '.',
                    Err(_) => '?',
                }
            })
            .collect();
        println!("{a1:>6.3} {row}");
    }
    Ok(())
}
