//! Correspondence between solutions on the graph and sequences of vertex
//! values.
//!
//! A sequence `ψ_j` solving the three-term relation
//!
//! ```text
//! S(ℓ_{j-1}) cos(A_j ℓ_j) ψ_{j+1} + S(ℓ_j) cos(A_{j-1} ℓ_{j-1}) ψ_{j-1}
//!     = ((α_j/2) S(ℓ_{j-1}) S(ℓ_j) + S(ℓ_{j-1} + ℓ_j)) ψ_j
//! ```
//!
//! determines the wavefunction on every ring; conversely the vertex values of
//! any solution satisfy it. On ring `j` with local coordinate `t ∈ [0, ℓ_j]`
//! the upper and lower edges carry
//!
//! ```text
//! ψ(t) = e^{-iAt} (p0 C(t) + p1 S(t)),    φ(t) = e^{iAt} (q0 C(t) + q1 S(t)).
//! ```
//!
//! Quasiderivatives are `𝒟ψ = (∂ + iA) ψ` and `𝒟φ = (∂ - iA) φ`.

use std::f64::consts::PI;
use std::num::NonZeroUsize;
use std::sync::OnceLock;

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;

use crate::dispersion::{kernels_unchecked, lambda_pair, xi, Background, Energy,
    DEFAULT_PUNCTURE_RADIUS};
use crate::error::{Result, SpectralError};
use crate::scenario::{ChainScenario, Ring};
use crate::transfer::transfer_between;

/// Collocation points per edge for the ODE check.
pub const COLLOCATION_POINTS: usize = 16;
/// Gauss–Legendre order per edge panel.
pub const QUADRATURE_ORDER: usize = 64;

/// Vertex values `ψ_j` for `j = base_index, base_index + 1, …`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteSolution {
    pub base_index: i64,
    pub values: Vec<Complex64>,
    pub energy: Energy,
}

impl DiscreteSolution {
    pub fn new(base_index: i64, values: Vec<Complex64>, energy: Energy) -> Result<Self> {
        if values.len() < 3 {
            return Err(SpectralError::InvalidInput(format!(
                "a discrete solution needs at least 3 values, got {}",
                values.len()
            )));
        }
        Ok(DiscreteSolution {
            base_index,
            values,
            energy,
        })
    }

    pub fn from_real(base_index: i64, values: &[f64], energy: Energy) -> Result<Self> {
        Self::new(
            base_index,
            values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
            energy,
        )
    }

    fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.norm()))
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(|v| v.im == 0.0)
    }
}

fn check_rings(ds: &DiscreteSolution, rings: &[Ring]) -> Result<()> {
    if rings.len() + 1 != ds.values.len() {
        return Err(SpectralError::InvalidInput(format!(
            "{} values need {} rings, got {}",
            ds.values.len(),
            ds.values.len() - 1,
            rings.len()
        )));
    }
    for r in rings {
        ds.energy
            .check_admissible(r.half_length, DEFAULT_PUNCTURE_RADIUS)?;
    }
    Ok(())
}

/// Largest defect of the three-term relation over interior vertices,
/// relative to `max |ψ_j|`. `rings[i]` joins vertex `i` to vertex `i + 1`
/// (counted from `base_index`); its `alpha` is the coupling at vertex `i`.
pub fn difference_residual(ds: &DiscreteSolution, rings: &[Ring]) -> Result<f64> {
    check_rings(ds, rings)?;
    let e = ds.energy.value();
    let scale = ds.max_abs().max(f64::MIN_POSITIVE);
    let mut worst = 0.0f64;
    for i in 1..ds.values.len() - 1 {
        let (prev, cur) = (&rings[i - 1], &rings[i]);
        let s_prev = kernels_unchecked(e, prev.half_length).s;
        let s_cur = kernels_unchecked(e, cur.half_length).s;
        let s_sum = kernels_unchecked(e, prev.half_length + cur.half_length).s;
        let cos_prev = (prev.field * prev.half_length).cos();
        let cos_cur = (cur.field * cur.half_length).cos();
        let v = &ds.values;
        let lhs = v[i + 1] * (s_prev * cos_cur) + v[i - 1] * (s_cur * cos_prev);
        let rhs = v[i] * (0.5 * cur.alpha * s_prev * s_cur + s_sum);
        worst = worst.max((lhs - rhs).norm() / scale);
    }
    Ok(worst)
}

/// Wavefunction on one ring in the kernel basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeWave {
    pub ring: Ring,
    pub energy: f64,
    /// `(p0, p1)` of the upper edge.
    pub upper: [Complex64; 2],
    /// `(q0, q1)` of the lower edge.
    pub lower: [Complex64; 2],
}

impl EdgeWave {
    pub fn zero(ring: Ring, energy: f64) -> Self {
        let z = Complex64::new(0.0, 0.0);
        EdgeWave {
            ring,
            energy,
            upper: [z; 2],
            lower: [z; 2],
        }
    }

    fn phase(&self, t: f64) -> Complex64 {
        Complex64::from_polar(1.0, -self.ring.field * t)
    }

    /// `ψ(t)` on the upper edge.
    pub fn upper_value(&self, t: f64) -> Complex64 {
        let k = kernels_unchecked(self.energy, t);
        self.phase(t) * (self.upper[0] * k.c + self.upper[1] * k.s)
    }

    /// `φ(t)` on the lower edge.
    pub fn lower_value(&self, t: f64) -> Complex64 {
        let k = kernels_unchecked(self.energy, t);
        self.phase(t).conj() * (self.lower[0] * k.c + self.lower[1] * k.s)
    }

    /// `𝒟ψ(t)`.
    pub fn upper_quasiderivative(&self, t: f64) -> Complex64 {
        let k = kernels_unchecked(self.energy, t);
        self.phase(t) * (self.upper[1] * k.c - self.upper[0] * (self.energy * k.s))
    }

    /// `𝒟φ(t)`.
    pub fn lower_quasiderivative(&self, t: f64) -> Complex64 {
        let k = kernels_unchecked(self.energy, t);
        self.phase(t).conj() * (self.lower[1] * k.c - self.lower[0] * (self.energy * k.s))
    }

    fn coefficient_scale(&self) -> f64 {
        self.upper
            .iter()
            .chain(&self.lower)
            .fold(0.0f64, |m, c| m.max(c.norm()))
    }

    /// Largest defect of `-(∂ ± iA)² u = E u` at Chebyshev points on both
    /// edges. Derivatives are assembled by the product rule from the plain
    /// kernel derivatives, not from the quasiderivative formula.
    pub fn ode_residual(&self) -> f64 {
        let (a, e, ell) = (self.ring.field, self.energy, self.ring.half_length);
        let scale = self.coefficient_scale().max(f64::MIN_POSITIVE) * e.abs().max(1.0);
        let mut worst = 0.0f64;
        for i in 0..COLLOCATION_POINTS {
            let x = (PI * (i as f64 + 0.5) / COLLOCATION_POINTS as f64).cos();
            let t = 0.5 * ell * (1.0 + x);
            let k = kernels_unchecked(e, t);
            for (coef, sign) in [(self.upper, -1.0), (self.lower, 1.0)] {
                // u = e^{i s A t} w, w = c0 C + c1 S
                let w = coef[0] * k.c + coef[1] * k.s;
                let dw = coef[1] * k.c - coef[0] * (e * k.s);
                let ddw = -(coef[0] * (e * k.c)) - coef[1] * (e * k.s);
                let ia = Complex64::new(0.0, sign * a);
                let ph = Complex64::from_polar(1.0, sign * a * t);
                let u = ph * w;
                let du = ph * (dw + ia * w);
                let ddu = ph * (ddw + ia * dw * 2.0 + ia * ia * w);
                // covariant derivative is ∂ - i s A
                let cov = Complex64::new(0.0, -sign * a);
                let lhs = -(ddu + cov * du * 2.0 + cov * cov * u);
                worst = worst.max((lhs - u * e).norm() / scale);
            }
        }
        worst
    }

    /// `∫ |ψ|² + |φ|²` over the ring.
    pub fn norm_squared(&self) -> f64 {
        let ell = self.ring.half_length;
        let panels = (ell / PI).ceil().max(1.0) as usize;
        let h = ell / panels as f64;
        let rule = quadrature();
        (0..panels)
            .map(|p| {
                let a = p as f64 * h;
                rule.integrate(a, a + h, |t| {
                    self.upper_value(t).norm_sqr() + self.lower_value(t).norm_sqr()
                })
            })
            .sum()
    }

    /// `(J_ψ, J_φ) = (2 Im(conj ψ 𝒟ψ), 2 Im(conj φ 𝒟φ))` at the ring midpoint.
    pub fn currents(&self) -> (f64, f64) {
        let t = 0.5 * self.ring.half_length;
        let jp = 2.0 * (self.upper_value(t).conj() * self.upper_quasiderivative(t)).im;
        let jf = 2.0 * (self.lower_value(t).conj() * self.lower_quasiderivative(t)).im;
        (jp, jf)
    }
}

fn quadrature() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(NonZeroUsize::new(QUADRATURE_ORDER).unwrap()))
}

/// Rebuilds the ring wavefunctions from vertex values.
pub fn reconstruct_wave(ds: &DiscreteSolution, rings: &[Ring]) -> Result<Vec<EdgeWave>> {
    let res = difference_residual(ds, rings)?;
    if res > 1e-8 {
        return Err(SpectralError::InvalidInput(format!(
            "sequence violates the difference relation (residual {res:.3e})"
        )));
    }
    let e = ds.energy.value();
    Ok(rings
        .iter()
        .enumerate()
        .map(|(i, ring)| {
            let (a, b) = (ds.values[i], ds.values[i + 1]);
            let k = kernels_unchecked(e, ring.half_length);
            let ph = Complex64::from_polar(1.0, ring.field * ring.half_length);
            EdgeWave {
                ring: *ring,
                energy: e,
                upper: [a, (b * ph - a * k.c) / k.s],
                lower: [a, (b * ph.conj() - a * k.c) / k.s],
            }
        })
        .collect())
}

/// Largest continuity or δ-coupling defect over the vertices between
/// consecutive waves, relative to the largest coefficient.
pub fn vertex_residual(waves: &[EdgeWave]) -> f64 {
    let scale = waves
        .iter()
        .fold(0.0f64, |m, w| m.max(w.coefficient_scale()))
        .max(f64::MIN_POSITIVE);
    let mut worst = 0.0f64;
    for pair in waves.windows(2) {
        let (left, right) = (&pair[0], &pair[1]);
        let l = left.ring.half_length;
        let v = right.upper_value(0.0);
        for other in [right.lower_value(0.0), left.upper_value(l), left.lower_value(l)] {
            worst = worst.max((other - v).norm() / scale);
        }
        let outgoing = right.upper_quasiderivative(0.0) + right.lower_quasiderivative(0.0)
            - left.upper_quasiderivative(l)
            - left.lower_quasiderivative(l);
        worst = worst.max((outgoing - v * right.ring.alpha).norm() / scale);
    }
    worst
}

/// `L²` norm squared of a wave list.
pub fn norm_squared(waves: &[EdgeWave]) -> f64 {
    waves.iter().map(EdgeWave::norm_squared).sum()
}

/// Largest ODE collocation defect over a wave list.
pub fn ode_residual(waves: &[EdgeWave]) -> f64 {
    waves.iter().fold(0.0f64, |m, w| m.max(w.ode_residual()))
}

/// Currents `(J_ψ, J_φ)` on each ring from the vertex values alone:
/// `J = (2 / S(ℓ)) Im(conj ψ_j ψ_{j+1} e^{±iAℓ})`, which for real sequences
/// reduces to `±(2/S(ℓ)) ψ_j ψ_{j+1} sin Aℓ`.
pub fn discrete_currents(ds: &DiscreteSolution, rings: &[Ring]) -> Result<Vec<(f64, f64)>> {
    check_rings(ds, rings)?;
    let e = ds.energy.value();
    let real = ds.is_real();
    Ok(rings
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let s = kernels_unchecked(e, r.half_length).s;
            let (a, b) = (ds.values[i], ds.values[i + 1]);
            let flux = r.field * r.half_length;
            if real {
                let j = 2.0 * a.re * b.re * flux.sin() / s;
                (j, -j)
            } else {
                let x = a.conj() * b;
                let jp = 2.0 * (x * Complex64::from_polar(1.0, flux)).im / s;
                let jf = 2.0 * (x * Complex64::from_polar(1.0, -flux)).im / s;
                (jp, jf)
            }
        })
        .collect())
}

/// Compactly supported eigenfunction at `E = n²` (half-length `π`) on two
/// adjacent rings, returned with a zero ring on either side so all three
/// vertices it touches are checked. Unit amplitude gives norm² `2π`.
pub fn flat_band_eigenfunction(n: u32, field: f64) -> Result<Vec<EdgeWave>> {
    if n == 0 {
        return Err(SpectralError::InvalidInput("flat bands start at n = 1".into()));
    }
    let ring = Ring {
        alpha: 0.0,
        field,
        half_length: PI,
    };
    let e = (n as f64).powi(2);
    let nf = n as f64;
    let z = Complex64::new(0.0, 0.0);
    let sign = if n.is_multiple_of(2) { -1.0 } else { 1.0 };
    let ph = Complex64::from_polar(1.0, field * PI);
    let first = EdgeWave {
        ring,
        energy: e,
        upper: [z, Complex64::new(nf, 0.0)],
        lower: [z, Complex64::new(-nf, 0.0)],
    };
    let second = EdgeWave {
        ring,
        energy: e,
        upper: [z, ph * (sign * nf)],
        lower: [z, ph.conj() * (-sign * nf)],
    };
    Ok(vec![
        EdgeWave::zero(ring, e),
        first,
        second,
        EdgeWave::zero(ring, e),
    ])
}

/// `J_ψ / J_φ` for the Bloch state with quasimomentum `θ π`
/// (`theta` as returned by [`crate::dispersion::floquet_theta`]), from
///
/// ```text
/// μ(A) = -(1 - e^{i(θπ - Aπ - kπ)}) / (1 - e^{i(θπ - Aπ + kπ)})
/// J_ψ / J_φ = (|μ(A)|² - 1) / (|μ(-A)|² - 1) · |(μ(-A) + 1) / (μ(A) + 1)|²
/// ```
pub fn floquet_current_ratio(theta: f64, energy: Energy, bg: &Background) -> Result<f64> {
    bg.checked_cos_flux()?;
    let e = energy.value();
    if e <= 0.0 {
        return Err(SpectralError::InvalidInput(
            "the flux ratio is defined for positive band energies".into(),
        ));
    }
    let k = e.sqrt();
    let t = theta * PI;
    let mu = |a: f64| {
        let i = Complex64::i();
        -(Complex64::new(1.0, 0.0) - (i * (t - a * PI - k * PI)).exp())
            / (Complex64::new(1.0, 0.0) - (i * (t - a * PI + k * PI)).exp())
    };
    let (mp, mm) = (mu(bg.field), mu(-bg.field));
    let tiny = 1e-12;
    let denom = mm.norm_sqr() - 1.0;
    let one = Complex64::new(1.0, 0.0);
    if !mp.is_finite() || !mm.is_finite() || denom.abs() < tiny || (mp + one).norm() < tiny {
        return Err(SpectralError::Singular(format!(
            "flux ratio undefined at theta = {theta}, E = {e}"
        )));
    }
    Ok((mp.norm_sqr() - 1.0) / denom * ((mm + one) / (mp + one)).norm_sqr())
}

/// Vertex sequence of a gap eigenfunction of a compactly supported
/// perturbation, with `tail` background rings on each side. The left tail
/// grows like `(λ^*)^j`, the support is crossed with the exact transfer
/// matrices and the right tail decays like `λ_*^j`. Values are real and
/// scaled to unit maximum. Returns the sequence and its rings.
pub fn eigen_sequence(
    sc: &ChainScenario,
    energy: Energy,
    tail: usize,
) -> Result<(DiscreteSolution, Vec<Ring>)> {
    let (first, last) = sc.support().ok_or_else(|| {
        SpectralError::ModeUnsupported("eigen_sequence needs a compact perturbation".into())
    })?;
    let lp = lambda_pair(xi(energy, &sc.background)?)?;
    let base = first - 1 - tail as i64;
    // ψ_j for j = base ..= first - 1 from the left tail
    let mut vals: Vec<f64> = (0..=tail as i32)
        .map(|p| lp.lambda_star.powi(tail as i32 - p))
        .collect();
    let mut v = [
        lp.lambda_sup * vals[tail],
        vals[tail],
    ];
    vals.push(v[0]); // ψ_first
    for j in first..=last + 1 {
        let n = transfer_between(energy, &sc.ring(j - 1), &sc.ring(j))?;
        v = n.apply(v);
        vals.push(v[0]);
    }
    for _ in 0..tail {
        let next = lp.lambda_star * vals[vals.len() - 1];
        vals.push(next);
    }
    let m = vals.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let vals: Vec<f64> = vals.iter().map(|x| x / m).collect();
    let rings = (0..vals.len() as i64 - 1).map(|i| sc.ring(base + i)).collect();
    Ok((DiscreteSolution::from_real(base, &vals, energy)?, rings))
}
