//! One ring rescaled to half-length `ℓ1`, everything else periodic.
//!
//! With `ξ1 = (S(ℓ+ℓ1) / (2 S(ℓ)) + (α/4) S(ℓ1)) / cos Aℓ1` and
//! `r = S(ℓ1) cos Aℓ / (S(ℓ) cos Aℓ1)`, `E` is an eigenvalue iff
//! `|2 ξ1 - λ_* r| = 1`. Unlike the other solvers several roots may share a
//! gap; their number grows without bound with `ℓ1` when `α > 0`.
//!
//! Near `cos Aℓ1 = 0` the roots come in tight pairs, one on each side of a
//! zero of `cos Aℓ1 · (2 ξ1 - λ_* r)`. Each member of a pair is the simple
//! root of one branch `cos Aℓ1 · (2 ξ1 - λ_* r) = ±cos Aℓ1`, so the branches
//! are bracketed separately.

use super::{scan, GapEigenvalue, Method};
use crate::bands::first_gaps;
use crate::dispersion::{checked_cos, kernels_unchecked, lambda_pair, Background};
use crate::error::{finite, Result, SpectralError};

/// `|2 ξ1 - λ_* r| - 1`, absent in bands.
pub fn geometric_characteristic(bg: &Background, ell1: f64, e: f64) -> Option<f64> {
    let cos_flux = bg.cos_flux();
    let cos_1 = (bg.field * ell1).cos();
    let k = kernels_unchecked(e, bg.ell);
    let s1 = kernels_unchecked(e, ell1).s;
    let s_sum = kernels_unchecked(e, bg.ell + ell1).s;
    let lp = lambda_pair((k.c + 0.25 * bg.alpha * k.s) / cos_flux).ok()?;
    let xi1 = (0.5 * s_sum / k.s + 0.25 * bg.alpha * s1) / cos_1;
    let r = s1 * cos_flux / (k.s * cos_1);
    Some((2.0 * xi1 - lp.lambda_star * r).abs() - 1.0)
}

/// `cos Aℓ1 · (2 ξ1 - λ_* r) - sign · cos Aℓ1`; smooth inside every gap.
fn branch(bg: &Background, ell1: f64, sign: f64, e: f64) -> Option<f64> {
    let cos_flux = bg.cos_flux();
    let cos_1 = (bg.field * ell1).cos();
    let k = kernels_unchecked(e, bg.ell);
    let s1 = kernels_unchecked(e, ell1).s;
    let s_sum = kernels_unchecked(e, bg.ell + ell1).s;
    let lp = lambda_pair((k.c + 0.25 * bg.alpha * k.s) / cos_flux).ok()?;
    let scaled = s_sum / k.s + 0.5 * bg.alpha * s1 - lp.lambda_star * s1 * cos_flux / k.s;
    Some(scaled - sign * cos_1)
}

/// Roots in gap `gap_index` and their number.
pub fn geometric_eigenvalues(
    bg: &Background,
    ell1: f64,
    gap_index: usize,
) -> Result<(Vec<GapEigenvalue>, usize)> {
    bg.checked_cos_flux()?;
    finite("ell1", ell1)?;
    if ell1 <= 0.0 {
        return Err(SpectralError::InvalidInput(format!(
            "ell1 must be positive, got {ell1}"
        )));
    }
    checked_cos(bg.field, ell1, "cos(A*ell1)")?;
    if gap_index == 0 {
        return Err(SpectralError::InvalidInput("gap indices start at 1".into()));
    }
    let bs = first_gaps(bg, gap_index)?;
    let gap = bs.gap(gap_index).copied().ok_or_else(|| {
        SpectralError::InvalidInput(format!("gap {gap_index} not resolved"))
    })?;
    let cap = scan::kappa_cap(bg.ell.max(ell1));
    let mut roots = Vec::new();
    for sign in [1.0, -1.0] {
        let f = |e: f64| branch(bg, ell1, sign, e);
        roots.extend(scan::solve_gap(&gap, &f, cap, Method::Geometric));
    }
    roots.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    let count = roots.len();
    Ok((roots, count))
}
