//! Half-integer flux decouples the rings: the spectrum is pure point and
//! the solvers refuse it with a pointer to the point-spectrum routine.

use ringchain::bands::{band_structure, degenerate_point_spectrum};
use ringchain::{Background, SpectralError};

fn main() -> ringchain::Result<()> {
    let bg = Background::new(-2.0, 0.5);
    match band_structure(&bg, (-5.0, 10.0)) {
        Err(e @ SpectralError::DegenerateFlux { .. }) => println!("{e}"),
        other => println!("unexpected: {other:?}"),
    }
    let points = degenerate_point_spectrum(bg.alpha, (-5.0, 10.0))?;
    println!("eigenvalues in [-5, 10]: {points:?}");
    Ok(())
}
