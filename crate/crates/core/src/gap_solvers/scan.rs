//! Gap-by-gap bracketing shared by the solvers.

use rayon::prelude::*;

use super::{GapEigenvalue, Method, RESIDUAL_LIMIT, ROOT_TOLERANCE};
use crate::bands::{first_gaps, Gap};
use crate::dispersion::Background;
use crate::error::Result;
use crate::roots::sign_changes;

/// Minimum uniform samples per gap.
pub(crate) const SAMPLES_PER_GAP: usize = 512;
const SAMPLES_PER_UNIT_K: f64 = 64.0;
/// Geometric offsets `10^-m` of the gap width placed next to each edge.
const EDGE_DECADES: i32 = 14;
/// Residuals above this mark a bracketed pole, not a root.
const POLE_RESIDUAL: f64 = 1e-6;
const KAPPA_START: f64 = 10.0;

fn sign(v: Option<f64>) -> Option<bool> {
    v.filter(|x| x.is_finite()).map(|x| x < 0.0)
}

/// Lower scan bound in `κ` for the semi-infinite gap: start at 10 and double
/// while the characteristic function still differs in sign from its value at
/// the cap (the functions are eventually monotone in `κ`).
fn kappa_max<F: Fn(f64) -> Option<f64>>(f: &F, cap: f64) -> f64 {
    let mut kappa = KAPPA_START.min(cap);
    let far = sign(f(-cap * cap));
    while kappa < cap {
        let here = sign(f(-kappa * kappa));
        if here.is_none() || far.is_none() || here == far {
            break;
        }
        kappa = (2.0 * kappa).min(cap);
    }
    kappa
}

/// Sorted sample energies strictly inside `gap`.
pub(crate) fn gap_samples<F: Fn(f64) -> Option<f64>>(gap: &Gap, f: &F, kappa_cap: f64) -> Vec<f64> {
    let lo = if gap.lo.is_finite() {
        gap.lo
    } else {
        let k = kappa_max(f, kappa_cap);
        -k * k
    };
    let hi = gap.hi;
    let s = |e: f64| e.signum() * e.abs().sqrt();
    let (s_lo, s_hi) = (s(lo), s(hi));
    let n = SAMPLES_PER_GAP.max((SAMPLES_PER_UNIT_K * (s_hi - s_lo)).ceil() as usize);
    let mut pts: Vec<f64> = (1..n)
        .map(|i| {
            let t = s_lo + (s_hi - s_lo) * i as f64 / n as f64;
            t * t.abs()
        })
        .collect();
    let width = hi - lo;
    for m in 1..=EDGE_DECADES {
        let d = width * 10f64.powi(-m);
        if gap.lo.is_finite() {
            pts.push(lo + d);
        }
        pts.push(hi - d);
    }
    if !gap.lo.is_finite() {
        pts.push(lo);
    }
    pts.retain(|&e| e > gap.lo && e < hi);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// Roots of `f` inside one gap.
pub(crate) fn solve_gap<F: Fn(f64) -> Option<f64>>(
    gap: &Gap,
    f: &F,
    kappa_cap: f64,
    method: Method,
) -> Vec<GapEigenvalue> {
    let pts = gap_samples(gap, f, kappa_cap);
    sign_changes(f, &pts, ROOT_TOLERANCE)
        .into_iter()
        .filter(|r| r.residual < POLE_RESIDUAL && gap.contains(r.energy))
        .map(|r| GapEigenvalue {
            gap_index: gap.index,
            energy: r.energy,
            residual: r.residual,
            method,
            warning: (r.residual >= RESIDUAL_LIMIT)
                .then(|| format!("residual {:.3e} above {RESIDUAL_LIMIT:e}", r.residual)),
        })
        .collect()
}

/// Largest `κ` keeping `cosh(κ L)` comfortably finite for every length `L`.
pub(crate) fn kappa_cap(max_length: f64) -> f64 {
    (250.0 / max_length).min(100.0)
}

/// Roots of `f` in gaps `1..=max_gap` of `bg`, ordered by gap.
pub(crate) fn solve_gaps<F>(
    bg: &Background,
    max_gap: usize,
    max_length: f64,
    method: Method,
    f: &F,
) -> Result<Vec<GapEigenvalue>>
where
    F: Fn(f64) -> Option<f64> + Sync,
{
    if max_gap == 0 {
        return Ok(Vec::new());
    }
    let bs = first_gaps(bg, max_gap)?;
    let cap = kappa_cap(max_length);
    let per_gap: Vec<Vec<GapEigenvalue>> = bs
        .gaps
        .par_iter()
        .map(|g| solve_gap(g, f, cap, method))
        .collect();
    Ok(per_gap.into_iter().flatten().collect())
}
