//! Band, gap and flat-band structure of the periodic operator.
//!
//! Bands are the maximal intervals where `|ξ(E)| ≤ 1`. They are bracketed on
//! a momentum grid anchored at `k = 0` (so the result inside a window never
//! depends on how far the window extends) and refined by bisection. Flat
//! bands sit at `E = (mπ/ℓ)²`; one lying strictly inside a gap splits it and
//! consumes a gap index. Gap 1 is the (semi-infinite) gap below the first
//! band.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::dispersion::{xi_numerator, Background, Energy};
use crate::error::{Result, SpectralError};
use crate::roots::sign_changes;

/// Grid density for bracketing, in points per unit of momentum (scaled by
/// `ℓ/π` for longer rings).
pub const GRID_POINTS_PER_UNIT_K: f64 = 64.0;

/// Bisection tolerance on band edges.
pub const EDGE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Band {
    pub index: usize,
    pub lo: f64,
    pub hi: f64,
    pub xi_lo: f64,
    pub xi_hi: f64,
    /// Edge coincides with a flat-band energy (touching bands).
    pub degenerate_lo: bool,
    pub degenerate_hi: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Gap {
    pub index: usize,
    /// `-∞` for the first gap.
    pub lo: f64,
    pub hi: f64,
}

impl Gap {
    pub fn contains(&self, e: f64) -> bool {
        e > self.lo && e < self.hi
    }

    pub fn is_odd(&self) -> bool {
        self.index % 2 == 1
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BandStructure {
    pub bands: Vec<Band>,
    pub gaps: Vec<Gap>,
    pub flat_bands: Vec<f64>,
    pub window: (f64, f64),
}

impl BandStructure {
    pub fn gap(&self, index: usize) -> Option<&Gap> {
        self.gaps.iter().find(|g| g.index == index)
    }

    pub fn gap_containing(&self, e: f64) -> Option<&Gap> {
        self.gaps.iter().find(|g| g.contains(e))
    }

    /// True if `e` is in the resolvent set (inside a gap, off flat bands).
    pub fn in_gap(&self, e: f64) -> bool {
        self.gap_containing(e).is_some()
    }
}

fn grid_step(ell: f64) -> f64 {
    1.0 / (GRID_POINTS_PER_UNIT_K * (ell / PI).max(1.0))
}

/// Momentum `κ` above which `|ξ| > 1` for every `E ≤ -κ²`.
fn kappa_floor(bg: &Background) -> f64 {
    (1.5 / bg.ell).max(0.5 * bg.alpha.abs()) + 1.0
}

/// Everything from `-∞` up to `e_top`, with global indices.
struct GlobalStructure {
    bands: Vec<Band>,
    gaps: Vec<Gap>,
    flats: Vec<f64>,
}

fn global_structure(bg: &Background, cos_flux: f64, e_top: f64) -> GlobalStructure {
    let ds = grid_step(bg.ell);
    let i_lo = (-kappa_floor(bg) / ds).floor() as i64;
    let i_hi = (e_top.max(0.0).sqrt() / ds).ceil() as i64 + 1;
    let h = |e: f64| Some((xi_numerator(e, bg.alpha, bg.ell) / cos_flux).abs() - 1.0);

    let grid: Vec<(f64, f64)> = (i_lo..=i_hi)
        .into_par_iter()
        .map(|i| {
            let s = i as f64 * ds;
            let e = s * s.abs();
            (e, h(e).unwrap())
        })
        .collect();

    // Edge list: (energy, entering_band)
    let mut edges = Vec::new();
    for w in grid.windows(2) {
        let ((a, fa), (b, fb)) = (w[0], w[1]);
        let in_a = fa <= 0.0;
        let in_b = fb <= 0.0;
        if in_a != in_b {
            edges.push((band_edge(&h, a, b, in_a), in_b));
        }
    }

    let flats = bg.flat_band_energies(f64::NEG_INFINITY, grid.last().unwrap().0);
    let near_flat = |e: f64| {
        flats
            .iter()
            .any(|&f| (e - f).abs() < 1e-9 * f.max(1.0))
    };
    let xi_at = |e: f64| xi_numerator(e, bg.alpha, bg.ell) / cos_flux;

    let mut bands = Vec::new();
    let mut it = edges.iter().peekable();
    while let Some(&(lo, entering)) = it.next() {
        debug_assert!(entering, "grid starts in a gap");
        let hi = match it.next() {
            Some(&(hi, _)) => hi,
            None => grid.last().unwrap().0,
        };
        bands.push(Band {
            index: bands.len() + 1,
            lo,
            hi,
            xi_lo: xi_at(lo),
            xi_hi: xi_at(hi),
            degenerate_lo: near_flat(lo),
            degenerate_hi: near_flat(hi),
        });
    }

    // Gaps between bands, split at flat energies strictly inside.
    let mut gaps = Vec::new();
    let mut lo = f64::NEG_INFINITY;
    let push_split = |lo: f64, hi: f64, gaps: &mut Vec<Gap>| {
        let mut start = lo;
        for &f in flats.iter().filter(|&&f| f > lo && f < hi) {
            if (f - lo).abs() < 1e-9 * f.max(1.0) || (hi - f).abs() < 1e-9 * f.max(1.0) {
                continue;
            }
            gaps.push(Gap {
                index: gaps.len() + 1,
                lo: start,
                hi: f,
            });
            start = f;
        }
        gaps.push(Gap {
            index: gaps.len() + 1,
            lo: start,
            hi,
        });
    };
    for band in &bands {
        if band.lo > lo {
            push_split(lo, band.lo, &mut gaps);
        }
        lo = band.hi;
    }
    let top = grid.last().unwrap().0;
    if bands.last().is_none_or(|b| b.hi < top) && lo < top {
        push_split(lo, top, &mut gaps);
    }

    GlobalStructure {
        bands,
        gaps,
        flats,
    }
}

/// Bisection on the predicate `h ≤ 0` between `a` (membership `in_a`) and `b`.
fn band_edge<F: Fn(f64) -> Option<f64>>(h: &F, mut a: f64, mut b: f64, in_a: bool) -> f64 {
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b || (b - a) <= EDGE_TOLERANCE * m.abs().max(1.0) {
            break;
        }
        if (h(m).unwrap() <= 0.0) == in_a {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

fn validate_window(window: (f64, f64)) -> Result<()> {
    let (lo, hi) = window;
    if !lo.is_finite() || !hi.is_finite() || lo >= hi {
        return Err(SpectralError::InvalidInput(format!(
            "window must be finite with E_min < E_max, got ({lo}, {hi})"
        )));
    }
    Ok(())
}

/// Scan top guaranteeing that the gap or band containing `e` is closed.
fn top_for(bg: &Background, e: f64) -> f64 {
    let step = PI / bg.ell;
    let m = (e.max(0.0).sqrt() / step).ceil() + 2.0;
    (m * step).powi(2)
}

/// Bands, gaps and flat bands meeting `window`. Edges are reported
/// unclipped; indices are global (gap 1 starts at `-∞`).
pub fn band_structure(bg: &Background, window: (f64, f64)) -> Result<BandStructure> {
    let cos_flux = bg.checked_cos_flux()?;
    validate_window(window)?;
    let (wlo, whi) = window;
    let g = global_structure(bg, cos_flux, top_for(bg, whi));
    Ok(BandStructure {
        bands: g
            .bands
            .into_iter()
            .filter(|b| b.hi >= wlo && b.lo <= whi)
            .collect(),
        gaps: g
            .gaps
            .into_iter()
            .filter(|gp| gp.hi > wlo && gp.lo < whi)
            .collect(),
        flat_bands: g
            .flats
            .into_iter()
            .filter(|&f| f >= wlo && f <= whi)
            .collect(),
        window,
    })
}

/// Highest momentum, in flat-band periods, searched for further gaps.
const MAX_GAP_SEARCH_PERIODS: f64 = 256.0;

/// The first `count` gaps (from `-∞` upward), with the bands and flat
/// bands below the top of the last one. Fewer gaps are returned when the
/// spectrum has no further open gap below the search ceiling (for instance
/// the nonmagnetic free chain, whose only gap is the first).
pub fn first_gaps(bg: &Background, count: usize) -> Result<BandStructure> {
    let cos_flux = bg.checked_cos_flux()?;
    let period = PI / bg.ell;
    let ceiling = (MAX_GAP_SEARCH_PERIODS * period).powi(2);
    let mut e_top = (4.0 * period).powi(2);
    loop {
        let g = global_structure(bg, cos_flux, e_top);
        let done = e_top >= ceiling;
        // The last gap may be truncated by the scan top; keep closed ones.
        let closed: Vec<Gap> = g.gaps.iter().copied().filter(|gp| gp.hi < e_top).collect();
        if closed.len() >= count || done {
            let gaps: Vec<Gap> = closed.into_iter().take(count).collect();
            let top = gaps.last().map_or(0.0, |gp| gp.hi);
            return Ok(BandStructure {
                bands: g.bands.into_iter().filter(|b| b.lo < top).collect(),
                flat_bands: g.flats.into_iter().filter(|&f| f <= top).collect(),
                window: (f64::NEG_INFINITY, top),
                gaps,
            });
        }
        e_top = top_for(bg, (2.0 * e_top).min(ceiling)).min(ceiling);
    }
}

/// Position of the first band relative to the threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FirstBandKind {
    InsideUnitInterval,
    StrictlyNegative,
    ContainsZero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FirstBandClass {
    pub kind: FirstBandKind,
    /// α lies on a threshold (within 1e-12); classified as containing zero.
    pub borderline: bool,
}

/// Thresholds `α > 4(|cos Aℓ| - 1)/ℓ` (inside the first flat-band period)
/// and `α < -4(|cos Aℓ| + 1)/ℓ` (strictly negative).
pub fn classify_first_band(bg: &Background) -> Result<FirstBandClass> {
    let c = bg.checked_cos_flux()?.abs();
    let upper = 4.0 * (c - 1.0) / bg.ell;
    let lower = -4.0 * (c + 1.0) / bg.ell;
    let on = |t: f64| (bg.alpha - t).abs() <= 1e-12 * t.abs().max(1.0);
    if on(upper) || on(lower) {
        return Ok(FirstBandClass {
            kind: FirstBandKind::ContainsZero,
            borderline: true,
        });
    }
    let kind = if bg.alpha > upper {
        FirstBandKind::InsideUnitInterval
    } else if bg.alpha < lower {
        FirstBandKind::StrictlyNegative
    } else {
        FirstBandKind::ContainsZero
    };
    Ok(FirstBandClass {
        kind,
        borderline: false,
    })
}

/// Point spectrum for `A - 1/2 ∈ ℤ` (ring half-length π): roots of
/// `cos kπ + (α/4k) sin kπ` and the integer squares, sorted, inside `window`.
pub fn degenerate_point_spectrum(alpha: f64, window: (f64, f64)) -> Result<Vec<f64>> {
    validate_window(window)?;
    let (lo, hi) = window;
    let f = |e: f64| Some(xi_numerator(e, alpha, PI));
    let ds = grid_step(PI);
    let s_lo = Energy::new(lo)?.signed_momentum();
    let s_hi = Energy::new(hi)?.signed_momentum();
    let i0 = (s_lo / ds).floor() as i64;
    let i1 = (s_hi / ds).ceil() as i64;
    let mut pts: Vec<f64> = (i0..=i1)
        .map(|i| {
            let s = i as f64 * ds;
            (s * s.abs()).clamp(lo, hi)
        })
        .collect();
    pts.dedup();
    let mut out: Vec<f64> = sign_changes(&f, &pts, 1e-15)
        .into_iter()
        .map(|r| r.energy)
        .filter(|&e| e > lo && e < hi)
        .collect();
    out.extend(Background::new(alpha, 0.5).flat_band_energies(lo, hi));
    out.sort_by(f64::total_cmp);
    out.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    Ok(out)
}
