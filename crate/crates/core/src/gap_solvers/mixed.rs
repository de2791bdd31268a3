//! One ring with its own field `A1` and its own left-vertex coupling `α1`.
//!
//! `E` is an eigenvalue iff
//! `α1 - α = (2 cos Aℓ / S(E,ℓ)) (λ_* (cos A1ℓ / cos Aℓ)² - λ^*)`,
//! and the right side is strictly increasing in `E` inside each gap.

use super::{scan, GapEigenvalue, Method};
use crate::dispersion::{kernels_unchecked, lambda_pair, Background};
use crate::error::{finite, Result};

/// Right side minus `α1 - α`, absent in bands.
pub fn mixed_characteristic(bg: &Background, alpha1: f64, a1: f64, e: f64) -> Option<f64> {
    let cos_flux = bg.cos_flux();
    let kr = kernels_unchecked(e, bg.ell);
    let lp = lambda_pair((kr.c + 0.25 * bg.alpha * kr.s) / cos_flux).ok()?;
    let ratio = (a1 * bg.ell).cos() / cos_flux;
    let rhs = 2.0 * cos_flux / kr.s * (lp.lambda_star * ratio * ratio - lp.lambda_sup);
    Some(rhs - (alpha1 - bg.alpha))
}

pub fn mixed_eigenvalues(
    bg: &Background,
    alpha1: f64,
    a1: f64,
    max_gap: usize,
) -> Result<Vec<GapEigenvalue>> {
    bg.checked_cos_flux()?;
    finite("alpha1", alpha1)?;
    finite("A1", a1)?;
    let f = |e: f64| mixed_characteristic(bg, alpha1, a1, e);
    scan::solve_gaps(bg, max_gap, bg.ell, Method::Mixed, &f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gap_solvers::{exact_eigenvalues, two_ring_eigenvalues};
    use crate::scenario::{ChainScenario, Perturbation};
    use std::f64::consts::PI;

    const THIRD: f64 = 1.0 / 3.0;

    #[test]
    fn unperturbed_has_no_roots() {
        let bg = Background::new(0.5, 0.27);
        assert!(mixed_eigenvalues(&bg, 0.5, 0.27, 6).unwrap().is_empty());
    }

    #[test]
    fn field_only_case_matches_two_ring() {
        let bg = Background::new(0.0, THIRD);
        let m = mixed_eigenvalues(&bg, 0.0, 0.0, 1).unwrap();
        let t = two_ring_eigenvalues(&bg, 0.0, THIRD, 1).unwrap();
        assert_eq!((m.len(), t.len()), (1, 1));
        assert!((m[0].energy - t[0].energy).abs() < 1e-10);
        let k = (5.0f64 / 8.0).acos() / PI;
        assert!((m[0].energy - k * k).abs() < 1e-10);
    }

    #[test]
    fn agrees_with_exact_determinant() {
        let bg = Background::new(-0.6, 0.18);
        let (alpha1, a1) = (1.4, -0.25);
        let closed = mixed_eigenvalues(&bg, alpha1, a1, 5).unwrap();
        let sc = ChainScenario::new(bg, Perturbation::Mixed { alpha1, a1 });
        let exact = exact_eigenvalues(&sc, 5).unwrap();
        assert!(!closed.is_empty());
        assert_eq!(closed.len(), exact.len());
        for (c, x) in closed.iter().zip(&exact) {
            assert!((c.energy - x.energy).abs() < 1e-9 * c.energy.abs().max(1.0));
        }
    }
}
