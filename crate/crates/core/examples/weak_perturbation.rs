//! Weak compact perturbations: first-order prediction against the exact
//! transfer determinant, and the second-order decay of their difference.

use ringchain::gap_solvers::weak_compact_eigenvalues;
use ringchain::{Background, WeakMode, WeakPerturbation};

fn main() -> ringchain::Result<()> {
    let bg = Background::new(0.0, 1.0 / 3.0);
    for eps in [2e-2, 1e-2, 5e-3] {
        let wp = WeakPerturbation::new(vec![1.0, -0.5], vec![-0.2, 0.1], eps)?;
        let first = weak_compact_eigenvalues(&bg, &wp, 4, WeakMode::FirstOrder)?;
        let exact = weak_compact_eigenvalues(&bg, &wp, 4, WeakMode::Exact)?;
        println!("epsilon = {eps}");
        for e in &exact {
            let approx = first.iter().find(|f| f.gap_index == e.gap_index);
            match approx {
                Some(f) => println!(
                    "  gap {}: exact {:.12}  first order {:.12}  diff {:.2e}",
                    e.gap_index,
                    e.energy,
                    f.energy,
                    (e.energy - f.energy).abs()
                ),
                None => println!("  gap {}: exact {:.12}", e.gap_index, e.energy),
            }
        }
    }
    Ok(())
}
