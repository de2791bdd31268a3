//! Discretized chain on a uniform mesh, independent of the transfer-matrix
//! machinery.
//!
//! Each edge of a ring is split into `M` cells of width `h_r = ℓ_r / M`
//! (piecewise-linear elements, lumped mass). Magnetic phases enter as
//! link factors `e^{±i A h_r}` on upper and lower edges, and each vertex
//! carries the mass of its half cells plus the coupling `α` in the
//! quadratic form. The resulting generalized problem `Q ψ = E M ψ` is
//! symmetrized to `M^{-1/2} Q M^{-1/2}`.
//!
//! Unknowns are ordered ring by ring: the left vertex, then interleaved
//! upper/lower interior nodes. This keeps the matrix banded with
//! half-bandwidth 2.

use std::collections::BTreeMap;
use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::banded::HermitianBand;
use crate::error::{Result, SpectralError};
use crate::scenario::{ChainScenario, Ring};

/// Largest accepted matrix dimension.
pub const DIMENSION_CAP: usize = 1 << 17;
/// Cells per edge never drop below this.
pub const MIN_CELLS_PER_EDGE: usize = 32;
const BANDWIDTH: usize = 2;

/// Treatment of the two outermost vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EndCondition {
    /// Wave function pinned to zero.
    #[default]
    Dirichlet,
    /// Kept as a vertex attached to the end ring only.
    Closed,
}

/// Where an unknown lives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeKind {
    Vertex,
    Upper,
    Lower,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Node {
    /// Ring position `0..n_rings`; a vertex belongs to the ring on its right
    /// (the final vertex to the last ring).
    pub ring: usize,
    pub kind: NodeKind,
    /// Distance from the ring's left vertex.
    pub t: f64,
}

/// Assembled discretization.
#[derive(Debug, Clone)]
pub struct FdChain {
    pub rings: Vec<Ring>,
    /// Scenario index of the first ring.
    pub first_ring: i64,
    pub h: f64,
    pub ends: EndCondition,
    pub nodes: Vec<Node>,
    /// Lumped mass per unknown.
    pub mass: Vec<f64>,
    /// Largest `|Q_ij - conj(Q_ji)|` of the assembled form.
    pub hermitian_defect: f64,
    pub(crate) matrix: HermitianBand,
}

impl FdChain {
    pub fn dimension(&self) -> usize {
        self.nodes.len()
    }

    pub fn n_rings(&self) -> usize {
        self.rings.len()
    }

    /// Entry of the symmetrized operator.
    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.matrix.get(i, j)
    }

    pub fn band(&self) -> &HermitianBand {
        &self.matrix
    }

    /// Energy scale above which the mesh no longer resolves the operator.
    pub fn ceiling(&self) -> f64 {
        let hmin = self
            .rings
            .iter()
            .map(|r| r.half_length / cells(r.half_length, self.h) as f64)
            .fold(f64::INFINITY, f64::min);
        super::CEILING_FRACTION * (std::f64::consts::PI / hmin).powi(2)
    }

    /// Writes nonzero entries as `row col re im` lines (0-based).
    pub fn write_coordinate<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let n = self.dimension();
        writeln!(w, "% {n} {n}")?;
        for i in 0..n {
            let j0 = i.saturating_sub(BANDWIDTH);
            let j1 = (i + BANDWIDTH).min(n - 1);
            for j in j0..=j1 {
                let v = self.matrix.get(i, j);
                if v != Complex64::new(0.0, 0.0) {
                    writeln!(w, "{i} {j} {:.17e} {:.17e}", v.re, v.im)?;
                }
            }
        }
        Ok(())
    }
}

fn cells(len: f64, h: f64) -> usize {
    ((len / h - 1e-9).ceil() as usize).max(MIN_CELLS_PER_EDGE)
}

/// Index of the first ring in an `n_rings` window centred on the support.
pub(crate) fn window_start(sc: &ChainScenario, n_rings: usize) -> i64 {
    let centre = sc.support().map_or(0, |(a, b)| (a + b).div_euclid(2));
    centre - (n_rings as i64 - 1) / 2
}

/// Discretization with Dirichlet ends and the default dimension cap.
pub fn assemble_fd(sc: &ChainScenario, h: f64, n_rings: usize) -> Result<FdChain> {
    assemble_fd_with(sc, h, n_rings, EndCondition::Dirichlet, DIMENSION_CAP)
}

pub fn assemble_fd_with(
    sc: &ChainScenario,
    h: f64,
    n_rings: usize,
    ends: EndCondition,
    cap: usize,
) -> Result<FdChain> {
    if !(h.is_finite() && h > 0.0) {
        return Err(SpectralError::InvalidInput(format!("mesh step {h} must be positive")));
    }
    if n_rings == 0 || n_rings.is_multiple_of(2) {
        return Err(SpectralError::InvalidInput(format!(
            "ring count {n_rings} must be odd"
        )));
    }
    let first_ring = window_start(sc, n_rings);
    let rings = sc.rings(first_ring, n_rings);
    let ell_min = rings.iter().map(|r| r.half_length).fold(f64::INFINITY, f64::min);
    let limit = ell_min / MIN_CELLS_PER_EDGE as f64;
    if h > limit * (1.0 + 1e-12) {
        return Err(SpectralError::MeshTooCoarse { h, limit });
    }
    let coupling_after = sc.ring(first_ring + n_rings as i64).alpha;

    let cell_counts: Vec<usize> = rings.iter().map(|r| cells(r.half_length, h)).collect();
    let closed = ends == EndCondition::Closed;
    let dimension: usize = cell_counts.iter().map(|m| 2 * (m - 1) + 1).sum::<usize>()
        - usize::from(!closed)
        + usize::from(closed);
    if dimension > cap {
        return Err(SpectralError::DimensionCap { dimension, cap });
    }

    // Vertex v (0..=n_rings) gets index vertex_idx[v], None when pinned.
    let mut nodes = Vec::with_capacity(dimension);
    let mut vertex_idx = vec![None; n_rings + 1];
    let mut interior_start = vec![0usize; n_rings];
    for (r, m) in cell_counts.iter().enumerate() {
        if r > 0 || closed {
            vertex_idx[r] = Some(nodes.len());
            nodes.push(Node {
                ring: r,
                kind: NodeKind::Vertex,
                t: 0.0,
            });
        }
        interior_start[r] = nodes.len();
        let hr = rings[r].half_length / *m as f64;
        for i in 1..*m {
            for kind in [NodeKind::Upper, NodeKind::Lower] {
                nodes.push(Node {
                    ring: r,
                    kind,
                    t: i as f64 * hr,
                });
            }
        }
    }
    if closed {
        vertex_idx[n_rings] = Some(nodes.len());
        nodes.push(Node {
            ring: n_rings - 1,
            kind: NodeKind::Vertex,
            t: rings[n_rings - 1].half_length,
        });
    }
    debug_assert_eq!(nodes.len(), dimension);

    let mut q: BTreeMap<(usize, usize), Complex64> = BTreeMap::new();
    let mut mass = vec![0.0; dimension];
    fn add(q: &mut BTreeMap<(usize, usize), Complex64>, i: usize, j: usize, v: Complex64) {
        *q.entry((i, j)).or_default() += v;
    }

    for (r, ring) in rings.iter().enumerate() {
        let m = cell_counts[r];
        let hr = ring.half_length / m as f64;
        for (side, sign) in [(0usize, 1.0), (1usize, -1.0)] {
            // nodes along this edge, None where pinned
            let node = |i: usize| -> Option<usize> {
                if i == 0 {
                    vertex_idx[r]
                } else if i == m {
                    vertex_idx[r + 1]
                } else {
                    Some(interior_start[r] + 2 * (i - 1) + side)
                }
            };
            let w = Complex64::from_polar(1.0, sign * ring.field * hr);
            for i in 0..m {
                // |w ψ_b - ψ_a|^2 / h
                let (a, b) = (node(i), node(i + 1));
                if let Some(a) = a {
                    add(&mut q, a, a, Complex64::new(1.0 / hr, 0.0));
                    mass[a] += 0.5 * hr;
                }
                if let Some(b) = b {
                    add(&mut q, b, b, Complex64::new(1.0 / hr, 0.0));
                    mass[b] += 0.5 * hr;
                }
                if let (Some(a), Some(b)) = (a, b) {
                    add(&mut q, a, b, -w / hr);
                    add(&mut q, b, a, -w.conj() / hr);
                }
            }
        }
    }
    for (v, idx) in vertex_idx.iter().enumerate() {
        if let Some(i) = idx {
            let alpha = if v < n_rings { rings[v].alpha } else { coupling_after };
            add(&mut q, *i, *i, Complex64::new(alpha, 0.0));
        }
    }

    let mut hermitian_defect = 0.0f64;
    let mut matrix = HermitianBand::zeros(dimension, BANDWIDTH);
    for (&(i, j), &v) in &q {
        let mirror = q.get(&(j, i)).copied().unwrap_or_default();
        hermitian_defect = hermitian_defect.max((v - mirror.conj()).norm());
        if i >= j {
            let scaled = v / (mass[i] * mass[j]).sqrt();
            matrix.set_lower(i, j, scaled);
        }
    }

    Ok(FdChain {
        rings,
        first_ring,
        h,
        ends,
        nodes,
        mass,
        hermitian_defect,
        matrix,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dispersion::Background;
    use crate::scenario::Perturbation;
    use std::f64::consts::PI;

    #[test]
    fn dimension_and_structure() {
        let sc = ChainScenario::unperturbed(Background::new(0.5, 0.2));
        let fd = assemble_fd(&sc, PI / 32.0, 3).unwrap();
        assert_eq!(fd.dimension(), 3 * 63 - 1);
        assert_eq!(fd.hermitian_defect, 0.0);
        for i in 0..fd.dimension() {
            assert_eq!(fd.entry(i, i).im, 0.0);
        }
    }

    #[test]
    fn rejects_even_counts_coarse_meshes_and_oversize() {
        let sc = ChainScenario::unperturbed(Background::new(0.5, 0.2));
        assert!(matches!(assemble_fd(&sc, PI / 32.0, 4), Err(SpectralError::InvalidInput(_))));
        assert!(matches!(
            assemble_fd(&sc, PI / 16.0, 3),
            Err(SpectralError::MeshTooCoarse { .. })
        ));
        assert!(matches!(
            assemble_fd_with(&sc, PI / 64.0, 5, EndCondition::Dirichlet, 100),
            Err(SpectralError::DimensionCap { .. })
        ));
    }

    #[test]
    fn window_is_centred_on_support() {
        let bg = Background::new(0.0, 1.0 / 3.0);
        let sc = ChainScenario::new(bg, Perturbation::TwoRingField { a1: 0.1, a2: 0.2 });
        assert_eq!(window_start(&sc, 5), -1);
        let fd = assemble_fd(&sc, PI / 32.0, 5).unwrap();
        assert_eq!(fd.rings[2].field, 0.1);
        assert_eq!(fd.rings[3].field, 0.2);
    }

    #[test]
    fn coordinate_dump_lists_both_triangles() {
        let sc = ChainScenario::unperturbed(Background::new(0.5, 0.2));
        let fd = assemble_fd(&sc, PI / 32.0, 1).unwrap();
        let mut buf = Vec::new();
        fd.write_coordinate(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with(&format!("% {0} {0}", fd.dimension())));
        assert!(text.contains("\n0 2 ") && text.contains("\n2 0 "));
    }
}
