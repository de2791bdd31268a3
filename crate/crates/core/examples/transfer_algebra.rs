//! Transfer-matrix identities: the reciprocal eigenvalue pair, the trace of
//! a power as a Chebyshev polynomial, and closed-form powers.

use ringchain::transfer::{background_power, chebyshev_eval, transfer_background, ChebyshevKind};
use ringchain::{chain_product, lambda_pair, xi, Background, Energy};

fn main() -> ringchain::Result<()> {
    let bg = Background::new(0.7, 0.21);
    for e in [-1.5, 0.05, 2.0, 3.3] {
        let energy = Energy::new(e)?;
        let x = xi(energy, &bg)?;
        let n = transfer_background(energy, &bg)?;
        let p = 5;
        let repeated = chain_product(&vec![n; p]);
        let closed = background_power(energy, &bg, p as u32)?;
        let t = 2.0 * chebyshev_eval(ChebyshevKind::First, p as u32, x)?;
        print!("E = {e:>5}: xi = {x:>9.5}, tr N^5 = {:>12.6} vs 2T_5 = {t:>12.6}, |power - product| = {:.1e}",
            repeated.trace, closed.max_abs_diff(&repeated.matrix));
        match lambda_pair(x) {
            Ok(lp) => println!(", lambda pair ({:.6}, {:.6})", lp.lambda_star, lp.lambda_sup),
            Err(_) => println!(", inside a band"),
        }
    }
    Ok(())
}
