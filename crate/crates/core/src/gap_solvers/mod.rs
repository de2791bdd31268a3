//! Eigenvalues created inside spectral gaps by local and weak perturbations.
//!
//! Every solver evaluates a real characteristic function on the gaps of the
//! background, brackets sign changes on a momentum grid refined near the gap
//! edges, and bisects. Brackets whose bisection residual blows up are poles
//! and are discarded.

mod geometric;
mod mixed;
mod periodic;
mod scan;
mod two_ring;
mod weak;

pub use geometric::{geometric_characteristic, geometric_eigenvalues};
pub use mixed::{mixed_characteristic, mixed_eigenvalues};
pub use periodic::{kp_gap_intersection, saxon_hutner_check, TraceCheck};
pub use two_ring::{two_ring_characteristic, two_ring_eigenvalues, two_ring_exists, two_ring_rhs};
pub use weak::{weak_compact_eigenvalues, weak_f, weak_g, weak_validity_ratio};

use serde::{Deserialize, Serialize};

use crate::dispersion::{lambda_pair, xi_numerator, Energy};
use crate::error::{Result, SpectralError};
use crate::scenario::{ChainScenario, Perturbation, WeakMode};
use crate::transfer::transfer_between;

/// Accepted roots must have a characteristic residual below this.
pub const RESIDUAL_LIMIT: f64 = 1e-9;

/// Relative bracket width at which bisection stops; roots are refined to
/// neighbouring floats, well inside `1e-13 max(1, |E|)`.
pub const ROOT_TOLERANCE: f64 = f64::EPSILON;

/// Which characteristic equation produced an eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    TwoRing,
    Mixed,
    Geometric,
    WeakFirstOrder,
    WeakExact,
    PeriodicTrace,
    ExactDeterminant,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::TwoRing => "two_ring",
            Method::Mixed => "mixed",
            Method::Geometric => "geometric",
            Method::WeakFirstOrder => "weak_first_order",
            Method::WeakExact => "weak_exact",
            Method::PeriodicTrace => "periodic_trace",
            Method::ExactDeterminant => "exact_determinant",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapEigenvalue {
    pub gap_index: usize,
    #[serde(rename = "E")]
    pub energy: f64,
    pub residual: f64,
    pub method: Method,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

/// Normalized characteristic determinant of a compactly supported
/// perturbation: `det[𝒩 u^*, u_*] / ((λ^*)^m (λ^* - λ_*))`, where `𝒩` is the
/// product of the `m` transfer matrices touching the support. It equals 1
/// for the unperturbed chain and vanishes exactly at gap eigenvalues.
pub fn characteristic_determinant(sc: &ChainScenario, energy: Energy) -> Result<f64> {
    let (det, splitting) = scaled_determinant(sc, energy)?;
    Ok(det / splitting)
}

/// `(det[𝒩 u^*, u_*] / (λ^*)^m, λ^* - λ_*)`. The first entry stays smooth up
/// to the gap edges, where the second vanishes.
fn scaled_determinant(sc: &ChainScenario, energy: Energy) -> Result<(f64, f64)> {
    let (first, last) = sc.support().ok_or_else(|| {
        SpectralError::ModeUnsupported("determinant needs a compactly supported perturbation".into())
    })?;
    let bg = &sc.background;
    let cos_flux = bg.checked_cos_flux()?;
    let lp = lambda_pair(xi_numerator(energy.value(), bg.alpha, bg.ell) / cos_flux)?;
    let mut v = [1.0, lp.lambda_star];
    for j in first..=last + 1 {
        let n = transfer_between(energy, &sc.ring(j - 1), &sc.ring(j))?;
        let w = n.apply(v);
        v = [w[0] / lp.lambda_sup, w[1] / lp.lambda_sup];
    }
    // u_* = (1, λ^*)
    Ok((v[0] * lp.lambda_sup - v[1], lp.lambda_sup - lp.lambda_star))
}

/// Roots of [`characteristic_determinant`] in gaps `1..=max_gap`.
pub fn exact_eigenvalues(sc: &ChainScenario, max_gap: usize) -> Result<Vec<GapEigenvalue>> {
    let method = match &sc.perturbation {
        Perturbation::WeakCompact {
            mode: WeakMode::Exact,
            ..
        } => Method::WeakExact,
        _ => Method::ExactDeterminant,
    };
    let lengths = (1..=2).map(|j| sc.ring(j).half_length).fold(sc.background.ell, f64::max);
    let f = |e: f64| {
        Energy::new(e)
            .ok()
            .and_then(|en| scaled_determinant(sc, en).ok())
            .map(|(det, _)| det)
    };
    scan::solve_gaps(&sc.background, max_gap, lengths, method, &f)
}

/// Gap eigenvalues of `sc` in gaps `1..=max_gap`, dispatched on the
/// perturbation type. Periodic perturbations have none: their spectrum is
/// absolutely continuous.
pub fn solve_scenario(sc: &ChainScenario, max_gap: usize) -> Result<Vec<GapEigenvalue>> {
    let bg = &sc.background;
    bg.checked_cos_flux()?;
    match &sc.perturbation {
        Perturbation::None | Perturbation::WeakPeriodic { .. } => Ok(Vec::new()),
        Perturbation::TwoRingField { a1, a2 } => two_ring_eigenvalues(bg, *a1, *a2, max_gap),
        Perturbation::Mixed { alpha1, a1 } => mixed_eigenvalues(bg, *alpha1, *a1, max_gap),
        Perturbation::Geometric { ell1 } => {
            let mut out = Vec::new();
            let available = if max_gap == 0 {
                0
            } else {
                crate::bands::first_gaps(bg, max_gap)?.gaps.len()
            };
            for gap in 1..=available {
                out.extend(geometric_eigenvalues(bg, *ell1, gap)?.0);
            }
            Ok(out)
        }
        Perturbation::WeakCompact { perturbation, mode } => {
            weak_compact_eigenvalues(bg, perturbation, max_gap, *mode)
        }
    }
}
