//! One ring with a changed flux and a changed vertex coupling.

use ringchain::gap_solvers::mixed_eigenvalues;
use ringchain::Background;

fn main() -> ringchain::Result<()> {
    let bg = Background::new(0.5, 0.25);
    for (alpha1, a1) in [(0.5, 0.0), (-1.0, 0.25), (2.0, 0.1), (-3.0, 0.0)] {
        let evs = mixed_eigenvalues(&bg, alpha1, a1, 6)?;
        let list: Vec<String> = evs
            .iter()
            .map(|e| format!("gap {} E={:.10}", e.gap_index, e.energy))
            .collect();
        println!("alpha1 = {alpha1:>5}, A1 = {a1:<5}: {}", list.join(", "));
    }
    Ok(())
}
