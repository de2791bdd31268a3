//! Weak compact perturbations `α + ε α_j`, `A + ε A_j` on rings `1..n`.
//!
//! To first order in `ε` the eigenvalues solve `ε g(E) = f(E)` with
//!
//! ```text
//! f(E) = -(cot Aℓ / ℓ) sqrt(1 - 1/ξ²)
//! g(E) = Σ A_j + S(E,ℓ) Σ α_j / (4 ℓ ξ sin Aℓ)
//! ```
//!
//! `f` vanishes at the gap edges, so weak-coupling roots hug an edge at a
//! distance `O(ε²)`. The exact mode roots the full determinant instead.

use super::{exact_eigenvalues, scan, GapEigenvalue, Method};
use crate::bands::first_gaps;
use crate::dispersion::{kernels_unchecked, xi_numerator, Background};
use crate::error::{Result, SpectralError};
use crate::scenario::{ChainScenario, Perturbation, WeakMode, WeakPerturbation};

/// First-order roots whose `|ε g|` exceeds this fraction of the gap's `|f|`
/// range carry a validity warning.
pub const FIRST_ORDER_VALIDITY: f64 = 0.1;

fn xi_of(bg: &Background, e: f64) -> f64 {
    xi_numerator(e, bg.alpha, bg.ell) / bg.cos_flux()
}

/// `f(E)`, absent in bands.
pub fn weak_f(bg: &Background, e: f64) -> Option<f64> {
    let x = xi_of(bg, e);
    if x.abs() <= 1.0 {
        return None;
    }
    let cot = 1.0 / (bg.field * bg.ell).tan();
    Some(-(cot / bg.ell) * (1.0 - 1.0 / (x * x)).sqrt())
}

/// `g(E)` for the sums `Σ α_j`, `Σ A_j`.
pub fn weak_g(bg: &Background, sum_alpha: f64, sum_field: f64, e: f64) -> f64 {
    let s = kernels_unchecked(e, bg.ell).s;
    let sin_flux = (bg.field * bg.ell).sin();
    sum_field + s * sum_alpha / (4.0 * bg.ell * xi_of(bg, e) * sin_flux)
}

fn check_first_order(bg: &Background) -> Result<()> {
    bg.checked_cos_flux()?;
    if (bg.field * bg.ell).sin().abs() < crate::dispersion::DEGENERATE_FLUX_THRESHOLD {
        return Err(SpectralError::ModeUnsupported(
            "first_order mode needs sin(A*pi) != 0; use exact mode".into(),
        ));
    }
    Ok(())
}

/// `|ε g(E)|` relative to the largest `|f|` over the gap containing `E`.
pub fn weak_validity_ratio(
    bg: &Background,
    wp: &WeakPerturbation,
    gap: &crate::bands::Gap,
    e: f64,
) -> f64 {
    let f = |x: f64| weak_f(bg, x);
    let range = scan::gap_samples(gap, &f, 10.0)
        .into_iter()
        .filter_map(f)
        .fold(0.0f64, |m, v| m.max(v.abs()));
    (wp.epsilon * weak_g(bg, wp.sum_alpha(), wp.sum_field(), e)).abs() / range
}

pub fn weak_compact_eigenvalues(
    bg: &Background,
    wp: &WeakPerturbation,
    max_gap: usize,
    mode: WeakMode,
) -> Result<Vec<GapEigenvalue>> {
    wp.validate()?;
    match mode {
        WeakMode::Exact => {
            let sc = ChainScenario::new(
                *bg,
                Perturbation::WeakCompact {
                    perturbation: wp.clone(),
                    mode,
                },
            );
            exact_eigenvalues(&sc, max_gap)
        }
        WeakMode::FirstOrder => {
            check_first_order(bg)?;
            let (sa, sf, eps) = (wp.sum_alpha(), wp.sum_field(), wp.epsilon);
            let f = |e: f64| weak_f(bg, e).map(|fv| eps * weak_g(bg, sa, sf, e) - fv);
            let mut roots = scan::solve_gaps(bg, max_gap, bg.ell, Method::WeakFirstOrder, &f)?;
            let bs = first_gaps(bg, max_gap)?;
            for r in &mut roots {
                if let Some(gap) = bs.gap(r.gap_index) {
                    let ratio = weak_validity_ratio(bg, wp, gap, r.energy);
                    if ratio > FIRST_ORDER_VALIDITY {
                        r.warning = Some(format!(
                            "first-order validity: |eps*g| is {ratio:.3} of the gap's |f| range"
                        ));
                    }
                }
            }
            Ok(roots)
        }
    }
}
