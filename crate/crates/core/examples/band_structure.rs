//! Bands, gaps and flat bands of the periodic chain, plus the first-band
//! classification for a few couplings.

use ringchain::bands::{band_structure, classify_first_band};
use ringchain::Background;

fn main() -> ringchain::Result<()> {
    let bg = Background::new(0.0, 1.0 / 3.0);
    let bs = band_structure(&bg, (-2.0, 20.0))?;
    println!("alpha = {}, A = {:.6}", bg.alpha, bg.field);
    for b in &bs.bands {
        println!("band {:>2}: [{:.12}, {:.12}]", b.index, b.lo, b.hi);
    }
    for g in &bs.gaps {
        println!("gap  {:>2}: ({:.12}, {:.12})", g.index, g.lo, g.hi);
    }
    println!("flat bands: {:?}", bs.flat_bands);

    for alpha in [0.0, -1.0, -2.0] {
        let class = classify_first_band(&Background::new(alpha, 1.0 / 3.0))?;
        println!("alpha = {alpha:>4}: first band {:?}", class.kind);
    }
    Ok(())
}
