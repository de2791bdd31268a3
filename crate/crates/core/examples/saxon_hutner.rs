//! Weak periodic perturbations: energies lying in the gaps of every
//! constituent chain stay in a gap of the composite chain.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ringchain::gap_solvers::{kp_gap_intersection, saxon_hutner_check};
use ringchain::{Background, Energy, WeakPerturbation};

fn main() -> ringchain::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let bg = Background::new(0.3, 0.27);
    let wp = WeakPerturbation::new(vec![0.8, -0.4, 0.2], vec![0.1, -0.15, 0.05], 1e-3)?;
    let rho = kp_gap_intersection(&bg, &wp, (-5.0, 20.0))?;
    let mut worst = f64::INFINITY;
    for &(lo, hi) in &rho {
        println!("interval ({lo:.9}, {hi:.9})");
        for _ in 0..20 {
            let e = rng.gen_range(lo..hi);
            let t = saxon_hutner_check(&bg, &wp, Energy::new(e)?)?;
            worst = worst.min(t.exact_trace.abs());
            assert!(t.in_gap, "E = {e} left the gap");
        }
    }
    println!("smallest |trace| over all samples: {worst:.6} (> 2 means in a gap)");
    Ok(())
}
