//! Oracle eigenvalues and their comparison with the analytic solvers.

use rayon::prelude::*;
use serde::Serialize;

use super::fd::{assemble_fd_with, EndCondition, FdChain, DIMENSION_CAP};
use crate::bands::first_gaps;
use crate::error::{Result, SpectralError};
use crate::gap_solvers::GapEigenvalue;
use crate::scenario::ChainScenario;

/// Eigenvectors with more than this share of their weight on the two
/// outermost rings at either end are truncation artifacts.
pub const EDGE_WEIGHT_LIMIT: f64 = 0.5;
/// Rings counted as "outermost" at each end.
const EDGE_RINGS: usize = 2;
const BISECTION_TOLERANCE: f64 = 1e-13;
/// Half-width of the search window around an analytic eigenvalue.
const MATCH_RADIUS: f64 = 0.5;
/// Extra rings in the truncation-sensitivity run.
const TRUNCATION_STEP: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleEigenvalue {
    pub energy: f64,
    /// Share of `|ψ|^2` (mass-weighted) on the outermost rings.
    pub edge_weight: f64,
    pub artifact: bool,
}

/// All discrete eigenvalues in `window`, with edge diagnostics.
pub fn oracle_spectrum(fd: &FdChain, window: (f64, f64)) -> Result<Vec<OracleEigenvalue>> {
    let ceiling = fd.ceiling();
    if window.1 >= ceiling {
        return Err(SpectralError::DiscretizationCeiling {
            lo: window.0,
            hi: window.1,
            ceiling,
        });
    }
    let band = fd.band();
    let (g_lo, _) = band.gershgorin();
    let lo = window.0.max(g_lo - 1.0);
    if lo >= window.1 {
        return Ok(Vec::new());
    }
    let energies = band.eigenvalues_in(lo, window.1, BISECTION_TOLERANCE);
    let n = fd.n_rings();
    let filter = n > 2 * EDGE_RINGS;
    Ok(energies
        .par_iter()
        .map(|&energy| {
            let edge_weight = if filter {
                let v = band.eigenvector(energy);
                fd.nodes
                    .iter()
                    .zip(&v)
                    .filter(|(node, _)| node.ring < EDGE_RINGS || node.ring >= n - EDGE_RINGS)
                    .map(|(_, c)| c.norm_sqr())
                    .sum()
            } else {
                0.0
            };
            OracleEigenvalue {
                energy,
                edge_weight,
                artifact: edge_weight > EDGE_WEIGHT_LIMIT,
            }
        })
        .collect())
}

/// Eigenvalues in `window` after removing truncation artifacts.
pub fn oracle_eigenvalues(fd: &FdChain, window: (f64, f64)) -> Result<Vec<f64>> {
    Ok(oracle_spectrum(fd, window)?
        .into_iter()
        .filter(|e| !e.artifact)
        .map(|e| e.energy)
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleMatch {
    pub gap_index: usize,
    pub analytic: f64,
    /// False when no filtered oracle eigenvalue lies in the gap window.
    pub matched: bool,
    /// Nearest non-artifact oracle eigenvalue in the same gap.
    pub oracle: Option<f64>,
    pub abs_error: Option<f64>,
    /// Same at half the mesh step.
    pub refined: Option<f64>,
    pub refined_error: Option<f64>,
    /// `abs_error / refined_error`; 4 for second-order convergence.
    pub convergence_ratio: Option<f64>,
    pub observed_order: Option<f64>,
    /// `|E(N) - E(N + 4)|` at the coarse step.
    pub truncation_shift: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    pub h: f64,
    pub n_rings: usize,
    pub dimension: usize,
    pub refined_dimension: usize,
    pub hermitian_defect: f64,
    pub matches: Vec<OracleMatch>,
}

impl OracleReport {
    /// Every analytic eigenvalue found a partner.
    pub fn all_matched(&self) -> bool {
        self.matches.iter().all(|m| m.matched)
    }
}

fn nearest(fd: &FdChain, window: (f64, f64), target: f64) -> Result<Option<f64>> {
    Ok(oracle_eigenvalues(fd, window)?
        .into_iter()
        .min_by(|a, b| (a - target).abs().total_cmp(&(b - target).abs())))
}

/// Compares analytic gap eigenvalues with the oracle at step `h`, at `h/2`,
/// and with four extra rings.
pub fn oracle_compare(
    sc: &ChainScenario,
    h: f64,
    n_rings: usize,
    analytic: &[GapEigenvalue],
) -> Result<OracleReport> {
    oracle_compare_with(sc, h, n_rings, analytic, DIMENSION_CAP)
}

/// [`oracle_compare`] with an explicit dimension cap (applied to the
/// refined mesh as well).
pub fn oracle_compare_with(
    sc: &ChainScenario,
    h: f64,
    n_rings: usize,
    analytic: &[GapEigenvalue],
    cap: usize,
) -> Result<OracleReport> {
    let assemble = |h: f64, n: usize| assemble_fd_with(sc, h, n, EndCondition::Dirichlet, cap);
    let coarse = assemble(h, n_rings)?;
    let fine = assemble(h / 2.0, n_rings)?;
    let longer = assemble(h, n_rings + TRUNCATION_STEP)?;
    let max_gap = analytic.iter().map(|e| e.gap_index).max().unwrap_or(0);
    let gaps = if max_gap == 0 {
        None
    } else {
        Some(first_gaps(&sc.background, max_gap)?)
    };

    let mut matches = Vec::with_capacity(analytic.len());
    for ev in analytic {
        let gap = gaps.as_ref().and_then(|g| g.gap(ev.gap_index)).ok_or_else(|| {
            SpectralError::InvalidInput(format!("gap {} not found", ev.gap_index))
        })?;
        let window = (
            gap.lo.max(ev.energy - MATCH_RADIUS),
            gap.hi.min(ev.energy + MATCH_RADIUS),
        );
        let oracle = nearest(&coarse, window, ev.energy)?;
        let refined = nearest(&fine, window, ev.energy)?;
        let extended = nearest(&longer, window, ev.energy)?;
        let abs_error = oracle.map(|o| (o - ev.energy).abs());
        let refined_error = refined.map(|o| (o - ev.energy).abs());
        let convergence_ratio = match (abs_error, refined_error) {
            (Some(a), Some(b)) if b > 0.0 => Some(a / b),
            _ => None,
        };
        matches.push(OracleMatch {
            gap_index: ev.gap_index,
            analytic: ev.energy,
            matched: oracle.is_some(),
            oracle,
            abs_error,
            refined,
            refined_error,
            convergence_ratio,
            observed_order: convergence_ratio.map(f64::log2),
            truncation_shift: match (oracle, extended) {
                (Some(a), Some(b)) => Some((a - b).abs()),
                _ => None,
            },
        });
    }
    Ok(OracleReport {
        h,
        n_rings,
        dimension: coarse.dimension(),
        refined_dimension: fine.dimension(),
        hermitian_defect: coarse.hermitian_defect.max(fine.hermitian_defect),
        matches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dispersion::Background;
    use crate::oracle::fd::assemble_fd;
    use crate::scenario::Perturbation;
    use std::f64::consts::PI;

    fn flux_ring() -> ChainScenario {
        ChainScenario::unperturbed(Background::new(0.0, 0.25))
    }

    fn ring_levels(h: f64) -> Vec<f64> {
        let fd = assemble_fd_with(&flux_ring(), h, 1, EndCondition::Closed, DIMENSION_CAP).unwrap();
        oracle_eigenvalues(&fd, (-1.0, 6.0)).unwrap()
    }

    #[test]
    fn single_ring_levels_converge_at_second_order() {
        let exact = [0.0625, 0.5625, 1.5625, 3.0625, 5.0625];
        let coarse = ring_levels(PI / 64.0);
        let fine = ring_levels(PI / 128.0);
        assert_eq!(coarse.len(), 5);
        assert_eq!(fine.len(), 5);
        for i in 0..5 {
            let r = (coarse[i] - exact[i]).abs() / (fine[i] - exact[i]).abs();
            assert!((3.2..=4.8).contains(&r), "level {i}: ratio {r}");
        }
    }

    #[test]
    fn banded_spectrum_matches_dense_solver() {
        let bg = Background::new(0.7, 0.3);
        let sc = ChainScenario::new(bg, Perturbation::Mixed { alpha1: -0.4, a1: 0.1 });
        let fd = assemble_fd(&sc, PI / 32.0, 3).unwrap();
        let n = fd.dimension();
        let m = nalgebra::DMatrix::from_fn(n, n, |i, j| fd.entry(i, j));
        let mut dense: Vec<f64> = m.symmetric_eigenvalues().iter().copied().filter(|&e| e < 10.0).collect();
        dense.sort_by(f64::total_cmp);
        let banded = oracle_eigenvalues(&fd, (f64::NEG_INFINITY, 10.0)).unwrap();
        assert_eq!(banded.len(), dense.len());
        for (a, b) in banded.iter().zip(&dense) {
            assert!((a - b).abs() < 1e-9 * b.abs().max(1.0), "{a} vs {b}");
        }
    }

    #[test]
    fn window_above_ceiling_is_rejected() {
        let fd = assemble_fd(&flux_ring(), PI / 32.0, 1).unwrap();
        assert!(matches!(
            oracle_spectrum(&fd, (0.0, 1e4)),
            Err(SpectralError::DiscretizationCeiling { .. })
        ));
    }
}
