//! From a gap eigenvalue to its vertex sequence and back to the wave on
//! every edge; checks the vertex conditions, the edge equation and the
//! current balance per ring.

use ringchain::duality::{discrete_currents, eigen_sequence, ode_residual, reconstruct_wave, vertex_residual};
use ringchain::gap_solvers::mixed_eigenvalues;
use ringchain::{Background, ChainScenario, Energy, Perturbation};

fn main() -> ringchain::Result<()> {
    let bg = Background::new(0.5, 0.25);
    let (alpha1, a1) = (-1.0, 0.1);
    let sc = ChainScenario::new(bg, Perturbation::Mixed { alpha1, a1 });
    for ev in mixed_eigenvalues(&bg, alpha1, a1, 4)? {
        let (seq, rings) = eigen_sequence(&sc, Energy::new(ev.energy)?, 6)?;
        let waves = reconstruct_wave(&seq, &rings)?;
        let currents = discrete_currents(&seq, &rings)?;
        let balance = currents.iter().map(|(a, b)| (a + b).abs()).fold(0.0, f64::max);
        println!(
            "gap {} E = {:.10}: vertex residual {:.1e}, edge residual {:.1e}, current imbalance {:.1e}",
            ev.gap_index,
            ev.energy,
            vertex_residual(&waves),
            ode_residual(&waves),
            balance
        );
    }
    Ok(())
}
