//! Two neighbouring rings carrying fields `A1`, `A2` in a background `A`.
//!
//! `E` is an eigenvalue iff `ξ λ^* = (cos² A1ℓ + cos² A2ℓ) / (2 cos² Aℓ)`.
//! The left side exceeds 1 throughout every gap and sweeps `(1, ∞)` once
//! per gap, so the ratio being above 1 is also sufficient for one simple
//! eigenvalue in every gap.

use super::{scan, GapEigenvalue, Method};
use crate::dispersion::{lambda_pair, xi_numerator, Background};
use crate::error::{finite, Result};

/// Right-hand side `(cos² A1ℓ + cos² A2ℓ) / (2 cos² Aℓ)`.
pub fn two_ring_rhs(bg: &Background, a1: f64, a2: f64) -> Result<f64> {
    let c = bg.checked_cos_flux()?;
    finite("A1", a1)?;
    finite("A2", a2)?;
    let c1 = (a1 * bg.ell).cos();
    let c2 = (a2 * bg.ell).cos();
    Ok((c1 * c1 + c2 * c2) / (2.0 * c * c))
}

pub fn two_ring_exists(bg: &Background, a1: f64, a2: f64) -> Result<bool> {
    Ok(two_ring_rhs(bg, a1, a2)? > 1.0)
}

/// `ξ λ^* - rhs`, absent in bands.
pub fn two_ring_characteristic(bg: &Background, rhs: f64, e: f64) -> Option<f64> {
    let x = xi_numerator(e, bg.alpha, bg.ell) / bg.cos_flux();
    lambda_pair(x).ok().map(|lp| lp.xi_lambda_sup() - rhs)
}

pub fn two_ring_eigenvalues(
    bg: &Background,
    a1: f64,
    a2: f64,
    max_gap: usize,
) -> Result<Vec<GapEigenvalue>> {
    let rhs = two_ring_rhs(bg, a1, a2)?;
    if rhs <= 1.0 {
        return Ok(Vec::new());
    }
    let f = |e: f64| two_ring_characteristic(bg, rhs, e);
    scan::solve_gaps(bg, max_gap, bg.ell, Method::TwoRing, &f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gap_solvers::{characteristic_determinant, exact_eigenvalues};
    use crate::scenario::{ChainScenario, Perturbation};
    use crate::Energy;
    use std::f64::consts::PI;

    const THIRD: f64 = 1.0 / 3.0;

    /// `E` with `cos kπ = c`, `k` in `[m, m+1]`.
    fn energy_from_cos(c: f64, m: u32) -> f64 {
        let base = c.acos() / PI;
        let k = if m.is_multiple_of(2) { m as f64 + base } else { m as f64 + 1.0 - base };
        k * k
    }

    #[test]
    fn reduces_to_cosine_roots() {
        let bg = Background::new(0.0, THIRD);
        let ev = two_ring_eigenvalues(&bg, 0.0, 0.0, 3).unwrap();
        assert_eq!(ev.len(), 3);
        let r = 2.0 / 7f64.sqrt();
        let expect = [energy_from_cos(r, 0), energy_from_cos(-r, 0), energy_from_cos(-r, 1)];
        for (i, (g, e)) in ev.iter().zip(expect).enumerate() {
            assert_eq!(g.gap_index, i + 1);
            assert!((g.energy - e).abs() < 1e-9, "{} vs {}", g.energy, e);
            assert!(g.residual < 1e-9);
        }
    }

    #[test]
    fn predicate_examples() {
        assert!(two_ring_exists(&Background::new(0.0, THIRD), 0.0, 0.0).unwrap());
        assert!(!two_ring_exists(&Background::new(0.0, 0.0), 0.5, 0.0).unwrap());
        assert!(!two_ring_exists(&Background::new(0.3, 0.2), 0.2, 0.2).unwrap());
        assert!(two_ring_eigenvalues(&Background::new(0.3, 0.2), 0.2, 0.2, 4)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn agrees_with_exact_determinant() {
        let bg = Background::new(0.7, 0.23);
        let (a1, a2) = (-0.1, 0.05);
        let closed = two_ring_eigenvalues(&bg, a1, a2, 4).unwrap();
        let sc = ChainScenario::new(bg, Perturbation::TwoRingField { a1, a2 });
        let exact = exact_eigenvalues(&sc, 4).unwrap();
        assert_eq!(closed.len(), exact.len());
        for (c, x) in closed.iter().zip(&exact) {
            assert_eq!(c.gap_index, x.gap_index);
            assert!((c.energy - x.energy).abs() < 1e-9 * c.energy.abs().max(1.0));
            let d = characteristic_determinant(&sc, Energy::new(c.energy).unwrap()).unwrap();
            assert!(d.abs() < 1e-7);
        }
    }
}
