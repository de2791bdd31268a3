//! Weak periodic perturbations with period `p` and the gap-intersection
//! (Saxon–Hutner) property.

use serde::Serialize;

use crate::bands::band_structure;
use crate::dispersion::{kernels_unchecked, xi, Background, Energy};
use crate::error::{Result, SpectralError};
use crate::scenario::{ChainScenario, Perturbation, WeakPerturbation};
use crate::transfer::{
    chain_product, chebyshev_eval, chebyshev_u, transfer_between, ChebyshevKind,
    MAX_CHEBYSHEV_DEGREE,
};

/// Background of the `j`-th constituent (1-based) single-parameter chain.
fn constituent(bg: &Background, wp: &WeakPerturbation, j: usize) -> Background {
    Background::with_ell(
        bg.alpha + wp.epsilon * wp.alphas[j - 1],
        bg.field + wp.epsilon * wp.fields[j - 1],
        bg.ell,
    )
}

fn intersect(a: &[(f64, f64)], b: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        let lo = a[i].0.max(b[j].0);
        let hi = a[i].1.min(b[j].1);
        if lo < hi {
            out.push((lo, hi));
        }
        if a[i].1 < b[j].1 {
            i += 1;
        } else {
            j += 1;
        }
    }
    out
}

/// Open intervals inside `window` lying in a gap of every constituent
/// periodic operator `α + ε α_j`, `A + ε A_j`.
pub fn kp_gap_intersection(
    bg: &Background,
    wp: &WeakPerturbation,
    window: (f64, f64),
) -> Result<Vec<(f64, f64)>> {
    wp.validate()?;
    let mut acc: Option<Vec<(f64, f64)>> = None;
    for j in 1..=wp.len() {
        let bs = band_structure(&constituent(bg, wp, j), window)?;
        let gaps: Vec<(f64, f64)> = bs
            .gaps
            .iter()
            .map(|g| (g.lo.max(window.0), g.hi.min(window.1)))
            .filter(|(lo, hi)| lo < hi)
            .collect();
        acc = Some(match acc {
            None => gaps,
            Some(prev) => intersect(&prev, &gaps),
        });
    }
    Ok(acc.unwrap_or_default())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceCheck {
    /// `tr 𝒩_p` from the product of the `p` exact transfer matrices.
    pub exact_trace: f64,
    /// `2 (T_p(ξ) + ε ℓ tan(Aℓ) ξ U_{p-1}(ξ) g)`.
    pub first_order_trace: f64,
    /// `|exact_trace| > 2`.
    pub in_gap: bool,
}

/// Exact and first-order monodromy traces over one period at `energy`.
pub fn saxon_hutner_check(
    bg: &Background,
    wp: &WeakPerturbation,
    energy: Energy,
) -> Result<TraceCheck> {
    wp.validate()?;
    let p = wp.len();
    if p as u32 > MAX_CHEBYSHEV_DEGREE {
        return Err(SpectralError::InvalidInput(format!(
            "period {p} exceeds {MAX_CHEBYSHEV_DEGREE}"
        )));
    }
    let cos_flux = bg.checked_cos_flux()?;
    let sc = ChainScenario::new(
        *bg,
        Perturbation::WeakPeriodic {
            perturbation: wp.clone(),
        },
    );
    let mut ms = Vec::with_capacity(p);
    for j in (1..=p as i64).rev() {
        ms.push(transfer_between(energy, &sc.ring(j - 1), &sc.ring(j))?);
    }
    let exact_trace = chain_product(&ms).trace;

    let x = xi(energy, bg)?;
    let s = kernels_unchecked(energy.value(), bg.ell).s;
    // ℓ tan(Aℓ) g, written without 1/sin(Aℓ)
    let scaled_g = bg.ell * (bg.field * bg.ell).tan() * wp.sum_field()
        + s * wp.sum_alpha() / (4.0 * x * cos_flux);
    let first_order_trace = 2.0 * chebyshev_eval(ChebyshevKind::First, p as u32, x)?
        + 2.0 * wp.epsilon * x * chebyshev_u(p as i64 - 1, x) * scaled_g;
    Ok(TraceCheck {
        exact_trace,
        first_order_trace,
        in_gap: exact_trace.abs() > 2.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_period_without_coupling_is_background() {
        let bg = Background::new(0.4, 0.3);
        let wp = WeakPerturbation::new(vec![0.7], vec![0.1], 0.0).unwrap();
        for e in [-1.0, 0.3, 2.2] {
            let en = Energy::new(e).unwrap();
            let t = saxon_hutner_check(&bg, &wp, en).unwrap();
            let x = xi(en, &bg).unwrap();
            assert!((t.exact_trace - 2.0 * x).abs() < 1e-12);
            assert!((t.first_order_trace - 2.0 * x).abs() < 1e-12);
            assert_eq!(t.in_gap, x.abs() > 1.0);
        }
    }

    #[test]
    fn first_order_trace_is_accurate_to_second_order() {
        let bg = Background::new(0.5, 0.22);
        let en = Energy::new(0.6).unwrap();
        let defect = |eps: f64| {
            let wp = WeakPerturbation::new(vec![0.8, -0.3, 0.4], vec![0.1, -0.15, 0.05], eps).unwrap();
            let t = saxon_hutner_check(&bg, &wp, en).unwrap();
            (t.exact_trace - t.first_order_trace).abs()
        };
        let r = defect(1e-3) / defect(2e-3);
        assert!((r - 0.25).abs() < 0.03, "ratio {r}");
    }

    #[test]
    fn intersection_of_one_is_its_gaps() {
        let bg = Background::new(0.3, 0.2);
        let wp = WeakPerturbation::new(vec![0.0], vec![0.0], 0.0).unwrap();
        let rho = kp_gap_intersection(&bg, &wp, (-2.0, 10.0)).unwrap();
        let bs = band_structure(&bg, (-2.0, 10.0)).unwrap();
        assert_eq!(rho.len(), bs.gaps.len());
    }

    #[test]
    fn interval_intersection() {
        let a = [(0.0, 2.0), (3.0, 5.0)];
        let b = [(1.0, 4.0)];
        assert_eq!(intersect(&a, &b), vec![(1.0, 2.0), (3.0, 4.0)]);
    }
}
