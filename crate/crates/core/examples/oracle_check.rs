//! Independent finite-difference check of a gap eigenvalue. Pass a mesh
//! divisor (default 256): the step is pi / divisor. Run with --release for
//! fine meshes.

use ringchain::gap_solvers::two_ring_eigenvalues;
use ringchain::{oracle_compare, Background, ChainScenario, Perturbation};
use std::f64::consts::PI;

fn main() -> ringchain::Result<()> {
    let divisor: f64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(256.0);
    let bg = Background::new(0.0, 1.0 / 3.0);
    let sc = ChainScenario::new(bg, Perturbation::TwoRingField { a1: 0.0, a2: 0.0 });
    let analytic = two_ring_eigenvalues(&bg, 0.0, 0.0, 3)?;
    let report = oracle_compare(&sc, PI / divisor, 21, &analytic)?;
    println!("dimension {} (refined {})", report.dimension, report.refined_dimension);
    for m in &report.matches {
        println!(
            "gap {}: analytic {:.10}  oracle {:?}  |dE| {:?}  h-halving ratio {:?}  N+4 shift {:?}",
            m.gap_index, m.analytic, m.oracle, m.abs_error, m.convergence_ratio, m.truncation_shift
        );
    }
    Ok(())
}
