//! 2×2 transfer matrices propagating vertex values `(ψ_{j+1}, ψ_j)` along
//! the chain, their products, and Chebyshev closed forms for powers.

use std::ops::Mul;

use crate::dispersion::{checked_cos, kernels_unchecked, xi, Background, Energy};
use crate::error::{finite, Result, SpectralError};
use crate::scenario::Ring;

/// Products longer than this accumulate in double-double arithmetic.
pub const COMPENSATED_PRODUCT_THRESHOLD: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferMatrix2 {
    pub a11: f64,
    pub a12: f64,
    pub a21: f64,
    pub a22: f64,
}

impl TransferMatrix2 {
    pub const IDENTITY: TransferMatrix2 = TransferMatrix2 {
        a11: 1.0,
        a12: 0.0,
        a21: 0.0,
        a22: 1.0,
    };

    pub fn new(a11: f64, a12: f64, a21: f64, a22: f64) -> Self {
        TransferMatrix2 { a11, a12, a21, a22 }
    }

    pub fn det(&self) -> f64 {
        self.a11 * self.a22 - self.a12 * self.a21
    }

    pub fn trace(&self) -> f64 {
        self.a11 + self.a22
    }

    pub fn apply(&self, v: [f64; 2]) -> [f64; 2] {
        [
            self.a11 * v[0] + self.a12 * v[1],
            self.a21 * v[0] + self.a22 * v[1],
        ]
    }

    pub fn max_abs_diff(&self, other: &TransferMatrix2) -> f64 {
        [
            self.a11 - other.a11,
            self.a12 - other.a12,
            self.a21 - other.a21,
            self.a22 - other.a22,
        ]
        .iter()
        .fold(0.0f64, |m, d| m.max(d.abs()))
    }

    pub fn max_abs(&self) -> f64 {
        [self.a11, self.a12, self.a21, self.a22]
            .iter()
            .fold(0.0f64, |m, d| m.max(d.abs()))
    }
}

impl Mul for TransferMatrix2 {
    type Output = TransferMatrix2;

    fn mul(self, r: TransferMatrix2) -> TransferMatrix2 {
        TransferMatrix2 {
            a11: self.a11 * r.a11 + self.a12 * r.a21,
            a12: self.a11 * r.a12 + self.a12 * r.a22,
            a21: self.a21 * r.a11 + self.a22 * r.a21,
            a22: self.a21 * r.a12 + self.a22 * r.a22,
        }
    }
}

/// Parameters entering the transfer matrix across the vertex between ring
/// `j-1` and ring `j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RingDescriptor {
    /// Coupling at the vertex joining ring `j-1` to ring `j`.
    pub alpha_v: f64,
    pub a_prev: f64,
    pub ell_prev: f64,
    pub a_cur: f64,
    pub ell_cur: f64,
}

impl RingDescriptor {
    pub fn between(prev: &Ring, cur: &Ring) -> Self {
        RingDescriptor {
            alpha_v: cur.alpha,
            a_prev: prev.field,
            ell_prev: prev.half_length,
            a_cur: cur.field,
            ell_cur: cur.half_length,
        }
    }

    /// Determinant the transfer matrix must have:
    /// `cos(A_{j-1} ℓ_{j-1}) S(E, ℓ_j) / (cos(A_j ℓ_j) S(E, ℓ_{j-1}))`.
    pub fn expected_det(&self, energy: Energy) -> f64 {
        let e = energy.value();
        (self.a_prev * self.ell_prev).cos() * kernels_unchecked(e, self.ell_cur).s
            / ((self.a_cur * self.ell_cur).cos() * kernels_unchecked(e, self.ell_prev).s)
    }
}

/// Transfer matrix `N_j` for an arbitrary pair of adjacent rings:
///
/// ```text
///            1        ⎡ (α/2) S(ℓ_j) + S(ℓ_{j-1}+ℓ_j)/S(ℓ_{j-1})    -S(ℓ_j) cos(A_{j-1}ℓ_{j-1}) / S(ℓ_{j-1}) ⎤
/// N_j = ───────────── ⎢                                                                                      ⎥
///       cos(A_j ℓ_j)  ⎣ cos(A_j ℓ_j)                                  0                                        ⎦
/// ```
pub fn transfer_general(energy: Energy, rd: &RingDescriptor) -> Result<TransferMatrix2> {
    for (what, v) in [
        ("alpha_v", rd.alpha_v),
        ("A_prev", rd.a_prev),
        ("ell_prev", rd.ell_prev),
        ("A_cur", rd.a_cur),
        ("ell_cur", rd.ell_cur),
    ] {
        finite(what, v)?;
    }
    if rd.ell_prev <= 0.0 || rd.ell_cur <= 0.0 {
        return Err(SpectralError::InvalidInput(
            "ring half-lengths must be positive".into(),
        ));
    }
    energy.check_admissible(rd.ell_prev, crate::dispersion::DEFAULT_PUNCTURE_RADIUS)?;
    let cos_cur = checked_cos(rd.a_cur, rd.ell_cur, "cos(A_cur*ell_cur)")?;
    Ok(transfer_unchecked(energy.value(), rd, cos_cur))
}

#[inline]
pub(crate) fn transfer_unchecked(e: f64, rd: &RingDescriptor, cos_cur: f64) -> TransferMatrix2 {
    let s_prev = kernels_unchecked(e, rd.ell_prev).s;
    let s_cur = kernels_unchecked(e, rd.ell_cur).s;
    let s_sum = kernels_unchecked(e, rd.ell_prev + rd.ell_cur).s;
    let cos_prev = (rd.a_prev * rd.ell_prev).cos();
    TransferMatrix2 {
        a11: (0.5 * rd.alpha_v * s_cur + s_sum / s_prev) / cos_cur,
        a12: -s_cur * cos_prev / (s_prev * cos_cur),
        a21: 1.0,
        a22: 0.0,
    }
}

/// Transfer matrix between two explicit rings.
pub fn transfer_between(energy: Energy, prev: &Ring, cur: &Ring) -> Result<TransferMatrix2> {
    transfer_general(energy, &RingDescriptor::between(prev, cur))
}

/// Background matrix `N = [[2ξ, -1], [1, 0]]`.
pub fn transfer_background(energy: Energy, bg: &Background) -> Result<TransferMatrix2> {
    let x = xi(energy, bg)?;
    Ok(TransferMatrix2::new(2.0 * x, -1.0, 1.0, 0.0))
}

/// First-order coefficient `M_j` in `N_j(ε) = N + ε ℓ tan(Aℓ) M_j + O(ε²)`
/// for the weak perturbation `α + ε α_j`, `A + ε A_j` (previous ring shift
/// `A_{j-1}`).
pub fn first_order_matrix(
    energy: Energy,
    bg: &Background,
    alpha_j: f64,
    a_j: f64,
    a_prev: f64,
) -> Result<TransferMatrix2> {
    let x = xi(energy, bg)?;
    let sin_flux = (bg.field * bg.ell).sin();
    if sin_flux.abs() < crate::dispersion::DEGENERATE_FLUX_THRESHOLD {
        return Err(SpectralError::ModeUnsupported(
            "first-order expansion needs sin(A*pi) != 0".into(),
        ));
    }
    let s = kernels_unchecked(energy.value(), bg.ell).s;
    Ok(TransferMatrix2::new(
        2.0 * a_j * x + alpha_j * s / (2.0 * bg.ell * sin_flux),
        a_prev - a_j,
        0.0,
        0.0,
    ))
}

/// Which Chebyshev family to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChebyshevKind {
    First,
    Second,
}

/// Largest degree accepted by [`chebyshev_eval`].
pub const MAX_CHEBYSHEV_DEGREE: u32 = 64;

/// `T_p(x)` or `U_p(x)` by the three-term recurrence.
pub fn chebyshev_eval(kind: ChebyshevKind, p: u32, x: f64) -> Result<f64> {
    if p > MAX_CHEBYSHEV_DEGREE {
        return Err(SpectralError::InvalidInput(format!(
            "Chebyshev degree {p} exceeds {MAX_CHEBYSHEV_DEGREE}"
        )));
    }
    let first = match kind {
        ChebyshevKind::First => x,
        ChebyshevKind::Second => 2.0 * x,
    };
    Ok(recurrence(1.0, first, p as i64, x))
}

/// `U_p(x)` with the conventions `U_{-1} = 0`, `U_{-2} = -1`.
pub(crate) fn chebyshev_u(p: i64, x: f64) -> f64 {
    match p {
        -2 => -1.0,
        -1 => 0.0,
        _ => recurrence(1.0, 2.0 * x, p, x),
    }
}

fn recurrence(p0: f64, p1: f64, p: i64, x: f64) -> f64 {
    if p == 0 {
        return p0;
    }
    let (mut prev, mut cur) = (p0, p1);
    for _ in 1..p {
        let next = 2.0 * x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `N^p = [[U_p(ξ), -U_{p-1}(ξ)], [U_{p-1}(ξ), -U_{p-2}(ξ)]]`.
pub fn background_power(energy: Energy, bg: &Background, p: u32) -> Result<TransferMatrix2> {
    if p == 0 || p > MAX_CHEBYSHEV_DEGREE {
        return Err(SpectralError::InvalidInput(format!(
            "power must lie in 1..={MAX_CHEBYSHEV_DEGREE}, got {p}"
        )));
    }
    let x = xi(energy, bg)?;
    let p = p as i64;
    Ok(TransferMatrix2::new(
        chebyshev_u(p, x),
        -chebyshev_u(p - 1, x),
        chebyshev_u(p - 1, x),
        -chebyshev_u(p - 2, x),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainProduct {
    pub matrix: TransferMatrix2,
    pub trace: f64,
    pub det: f64,
}

/// Ordered product `ms[0] · ms[1] · … · ms[n-1]`; acting on a vector the
/// last factor applies first, so `[N_{n+1}, …, N_1]` yields `𝒩_n`.
/// The empty product is the identity.
pub fn chain_product(ms: &[TransferMatrix2]) -> ChainProduct {
    let matrix = if ms.len() > COMPENSATED_PRODUCT_THRESHOLD {
        compensated_product(ms)
    } else {
        ms.iter()
            .fold(TransferMatrix2::IDENTITY, |acc, &m| acc * m)
    };
    ChainProduct {
        matrix,
        trace: matrix.trace(),
        det: matrix.det(),
    }
}

// Double-double accumulation for long products.

#[derive(Clone, Copy)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    fn from(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let e = e + self.lo + o.lo;
        let (hi, lo) = quick_two_sum(s, e);
        Dd { hi, lo }
    }

    fn mul_f64(self, b: f64) -> Dd {
        let p = self.hi * b;
        let e = self.hi.mul_add(b, -p) + self.lo * b;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    fn value(self) -> f64 {
        self.hi + self.lo
    }
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

fn compensated_product(ms: &[TransferMatrix2]) -> TransferMatrix2 {
    let mut acc = [Dd::from(1.0), Dd::from(0.0), Dd::from(0.0), Dd::from(1.0)];
    for m in ms {
        let [a11, a12, a21, a22] = acc;
        acc = [
            a11.mul_f64(m.a11).add(a12.mul_f64(m.a21)),
            a11.mul_f64(m.a12).add(a12.mul_f64(m.a22)),
            a21.mul_f64(m.a11).add(a22.mul_f64(m.a21)),
            a21.mul_f64(m.a12).add(a22.mul_f64(m.a22)),
        ];
    }
    TransferMatrix2::new(acc[0].value(), acc[1].value(), acc[2].value(), acc[3].value())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dispersion::lambda_pair;
    use std::f64::consts::PI;

    fn e(v: f64) -> Energy {
        Energy::new(v).unwrap()
    }

    #[test]
    fn general_matrix_examples() {
        let rd = RingDescriptor {
            alpha_v: 0.0,
            a_prev: 1.0 / 3.0,
            ell_prev: PI,
            a_cur: 1.0 / 3.0,
            ell_cur: PI,
        };
        let m = transfer_general(e(0.25), &rd).unwrap();
        assert!(m.max_abs_diff(&TransferMatrix2::new(0.0, -1.0, 1.0, 0.0)) < 1e-12);

        let rd = RingDescriptor { a_cur: 0.0, ..rd };
        let m = transfer_general(e(0.25), &rd).unwrap();
        assert!((m.a12 + 0.5).abs() < 1e-12);
        assert_eq!((m.a21, m.a22), (1.0, 0.0));
    }

    #[test]
    fn identical_rings_reduce_to_background() {
        for &(alpha, field, ev) in &[(0.0, 1.0 / 3.0, 0.25), (1.3, 0.2, -2.0), (-2.0, 0.41, 3.7)] {
            let bg = Background::new(alpha, field);
            let ring = Ring::background(&bg);
            let g = transfer_between(e(ev), &ring, &ring).unwrap();
            let b = transfer_background(e(ev), &bg).unwrap();
            assert!(g.max_abs_diff(&b) < 1e-12);
        }
    }

    #[test]
    fn background_examples() {
        let bg = Background::new(0.0, 1.0 / 3.0);
        let m = transfer_background(e(1.0), &bg).unwrap();
        assert!(m.max_abs_diff(&TransferMatrix2::new(-4.0, -1.0, 1.0, 0.0)) < 1e-12);
        assert_eq!(m.det(), 1.0);
    }

    #[test]
    fn puncture_and_degenerate_flux_rejected() {
        let rd = RingDescriptor {
            alpha_v: 0.0,
            a_prev: 0.2,
            ell_prev: PI,
            a_cur: 0.2,
            ell_cur: PI,
        };
        assert!(matches!(
            transfer_general(e(4.0), &rd),
            Err(SpectralError::Puncture { .. })
        ));
        let rd = RingDescriptor { a_cur: 0.5, ..rd };
        assert!(matches!(
            transfer_general(e(0.3), &rd),
            Err(SpectralError::DegenerateFlux { .. })
        ));
    }

    #[test]
    fn chebyshev_examples() {
        use ChebyshevKind::*;
        assert_eq!(chebyshev_eval(First, 2, -2.0).unwrap(), 7.0);
        assert_eq!(chebyshev_eval(Second, 1, -2.0).unwrap(), -4.0);
        assert!((chebyshev_eval(First, 5, 0.3f64.cos()).unwrap() - 1.5f64.cos()).abs() < 1e-12);
        assert!((chebyshev_eval(Second, 3, 0.5).unwrap() + 1.0).abs() < 1e-15);
        assert!(chebyshev_eval(First, 65, 0.5).is_err());
    }

    #[test]
    fn power_examples() {
        let bg = Background::new(1.0, 0.2);
        let n = transfer_background(e(0.2), &bg).unwrap();
        let p1 = background_power(e(0.2), &bg, 1).unwrap();
        assert!(p1.max_abs_diff(&n) < 1e-15);
        let p5 = background_power(e(0.2), &bg, 5).unwrap();
        let direct = chain_product(&[n; 5]).matrix;
        assert!(p5.max_abs_diff(&direct) < 1e-10);

        // ξ = -2 at E = 1 for α = 0, A = 1/3
        let bg = Background::new(0.0, 1.0 / 3.0);
        let p2 = background_power(e(1.0), &bg, 2).unwrap();
        assert!((p2.trace() - 14.0).abs() < 1e-12);
    }

    #[test]
    fn empty_product_is_identity() {
        let cp = chain_product(&[]);
        assert_eq!(cp.matrix, TransferMatrix2::IDENTITY);
        assert_eq!((cp.trace, cp.det), (2.0, 1.0));
    }

    #[test]
    fn eigenvector_contract() {
        let bg = Background::new(0.5, 0.3);
        for ev in [-3.0, -0.5, 0.02, 0.6, 1.2] {
            let n = transfer_background(e(ev), &bg).unwrap();
            let x = xi(e(ev), &bg).unwrap();
            if x.abs() <= 1.0 {
                continue;
            }
            let lp = lambda_pair(x).unwrap();
            let v = n.apply([1.0, lp.lambda_star]);
            assert!((v[0] - lp.lambda_sup).abs() < 1e-10 * lp.lambda_sup.abs());
            assert!((v[1] - lp.lambda_sup * lp.lambda_star).abs() < 1e-10);
            let w = n.apply([1.0, lp.lambda_sup]);
            assert!((w[0] - lp.lambda_star).abs() < 1e-10);
            assert!((w[1] - lp.lambda_star * lp.lambda_sup).abs() < 1e-10);
        }
    }

    #[test]
    fn first_order_matrix_matches_expansion() {
        let bg = Background::new(0.7, 0.27);
        let (aj, fj, fprev) = (1.3, -0.4, 0.25);
        let en = e(0.05);
        let m = first_order_matrix(en, &bg, aj, fj, fprev).unwrap();
        let n = transfer_background(en, &bg).unwrap();
        let tan = (bg.field * bg.ell).tan();
        let defect = |eps: f64| {
            let prev = Ring {
                field: bg.field + eps * fprev,
                ..Ring::background(&bg)
            };
            let cur = Ring {
                alpha: bg.alpha + eps * aj,
                field: bg.field + eps * fj,
                half_length: bg.ell,
            };
            let nj = transfer_between(en, &prev, &cur).unwrap();
            let lin = TransferMatrix2::new(
                n.a11 + eps * bg.ell * tan * m.a11,
                n.a12 + eps * bg.ell * tan * m.a12,
                n.a21,
                n.a22,
            );
            nj.max_abs_diff(&lin)
        };
        let r = defect(1e-3) / defect(2e-3);
        assert!((r - 0.25).abs() < 0.02, "ratio {r}");
    }

    #[test]
    fn compensated_product_agrees_with_naive() {
        let bg = Background::new(0.3, 0.21);
        let n = transfer_background(e(0.2), &bg).unwrap();
        let ms = vec![n; 30];
        let naive = ms.iter().fold(TransferMatrix2::IDENTITY, |a, &m| a * m);
        let comp = chain_product(&ms).matrix;
        assert!(naive.max_abs_diff(&comp) < 1e-9 * naive.max_abs().max(1.0));
    }
}
