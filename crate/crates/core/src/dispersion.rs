//! Branch-safe trigonometric kernels and the dispersion function of the
//! periodic chain.
//!
//! Every formula of the engine is written with the pair
//!
//! ```text
//! C(E, L) = cos kL,         S(E, L) = sin kL / k         (E > 0, k = sqrt(E))
//! C(E, L) = cosh κL,        S(E, L) = sinh κL / κ        (E < 0, κ = sqrt(-E))
//! C(0, L) = 1,              S(0, L) = L
//! ```
//!
//! so ratios such as `sin kℓ / sin kπ` become `S(E, ℓ) / S(E, π)` and stay
//! real on both sides of the threshold.

use std::f64::consts::PI;

use crate::error::{finite, Result, SpectralError};

/// Default exclusion radius (in momentum) around the punctures `k ℓ ∈ π ℕ`.
pub const DEFAULT_PUNCTURE_RADIUS: f64 = 1e-9;

/// `|cos Aℓ|` below this routes to the degenerate (pure point) branch.
pub const DEGENERATE_FLUX_THRESHOLD: f64 = 1e-12;

/// A finite real energy `E = k²`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Energy(f64);

impl Energy {
    pub fn new(e: f64) -> Result<Self> {
        finite("E", e).map(Energy)
    }

    /// Energy from the signed momentum `s`, i.e. `E = s |s|`.
    pub fn from_signed_momentum(s: f64) -> Result<Self> {
        Energy::new(s * s.abs())
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `k` for `E > 0`, `-κ` for `E < 0`.
    pub fn signed_momentum(self) -> f64 {
        self.0.signum() * self.0.abs().sqrt()
    }

    /// Rejects energies whose momentum satisfies `sin(k L) = 0` with `k > 0`,
    /// up to `radius` in `k`.
    pub fn check_admissible(self, length: f64, radius: f64) -> Result<()> {
        if self.0 <= 0.0 {
            return Ok(());
        }
        let k = self.0.sqrt();
        let step = PI / length;
        let m = (k / step).round();
        if m >= 1.0 && (k - m * step).abs() < radius {
            return Err(SpectralError::Puncture { k, length });
        }
        Ok(())
    }
}

/// The kernel pair `(C, S)` at one energy and length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrigKernels {
    pub c: f64,
    pub s: f64,
    pub length: f64,
}

/// Evaluates `C(E, L)` and `S(E, L)`.
pub fn trig_kernels(energy: Energy, length: f64) -> Result<TrigKernels> {
    let length = finite("L", length)?;
    if length <= 0.0 {
        return Err(SpectralError::InvalidInput(format!(
            "segment length must be positive, got {length}"
        )));
    }
    Ok(kernels_unchecked(energy.value(), length))
}

#[inline]
pub(crate) fn kernels_unchecked(e: f64, length: f64) -> TrigKernels {
    let (c, s) = if e > 0.0 {
        let k = e.sqrt();
        let (sn, cs) = (k * length).sin_cos();
        (cs, sn / k)
    } else if e < 0.0 {
        let kappa = (-e).sqrt();
        let x = kappa * length;
        (x.cosh(), x.sinh() / kappa)
    } else {
        (1.0, length)
    };
    TrigKernels { c, s, length }
}

/// Coupling constant, flux and ring half-length of the periodic chain.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Background {
    pub alpha: f64,
    #[serde(rename = "A")]
    pub field: f64,
    #[serde(default = "default_ell")]
    pub ell: f64,
}

fn default_ell() -> f64 {
    PI
}

impl Background {
    pub fn new(alpha: f64, field: f64) -> Self {
        Background {
            alpha,
            field,
            ell: PI,
        }
    }

    pub fn with_ell(alpha: f64, field: f64, ell: f64) -> Self {
        Background { alpha, field, ell }
    }

    pub fn validate(&self) -> Result<()> {
        finite("alpha", self.alpha)?;
        finite("A", self.field)?;
        finite("ell", self.ell)?;
        if self.ell <= 0.0 {
            return Err(SpectralError::InvalidInput(format!(
                "ring half-length must be positive, got {}",
                self.ell
            )));
        }
        Ok(())
    }

    /// `cos(A ℓ)`, raw.
    pub fn cos_flux(&self) -> f64 {
        (self.field * self.ell).cos()
    }

    /// `cos(A ℓ)` after the degenerate-flux check.
    pub fn checked_cos_flux(&self) -> Result<f64> {
        self.validate()?;
        checked_cos(self.field, self.ell, "cos(A*pi)")
    }

    /// True when `A ℓ / π - 1/2` is an integer (up to the flux threshold).
    pub fn is_degenerate(&self) -> bool {
        self.cos_flux().abs() < DEGENERATE_FLUX_THRESHOLD
    }

    /// Flat-band energies `(m π / ℓ)²`, `m ≥ 1`, inside `[lo, hi]`.
    pub fn flat_band_energies(&self, lo: f64, hi: f64) -> Vec<f64> {
        let step = PI / self.ell;
        let mut out = Vec::new();
        let mut m = 1u64;
        loop {
            let e = (m as f64 * step).powi(2);
            if e > hi {
                break;
            }
            if e >= lo {
                out.push(e);
            }
            m += 1;
        }
        out
    }
}

pub(crate) fn checked_cos(field: f64, length: f64, label: &str) -> Result<f64> {
    let c = (field * length).cos();
    if c.abs() < DEGENERATE_FLUX_THRESHOLD {
        let what = if (length - PI).abs() < 1e-15 {
            label.to_string()
        } else {
            format!("cos(A*{length})")
        };
        return Err(SpectralError::DegenerateFlux { what, value: c });
    }
    Ok(c)
}

/// Dispersion numerator `C(E, ℓ) + (α/4) S(E, ℓ)`, i.e. `ξ cos(Aℓ)`.
pub(crate) fn xi_numerator(e: f64, alpha: f64, ell: f64) -> f64 {
    let kr = kernels_unchecked(e, ell);
    kr.c + 0.25 * alpha * kr.s
}

/// The dispersion function `ξ(E) = (C(E,ℓ) + (α/4) S(E,ℓ)) / cos(Aℓ)`.
pub fn xi(energy: Energy, bg: &Background) -> Result<f64> {
    let cos_flux = bg.checked_cos_flux()?;
    Ok(xi_numerator(energy.value(), bg.alpha, bg.ell) / cos_flux)
}

/// The reciprocal eigenvalue pair of the background transfer matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaPair {
    /// Root of modulus below one.
    pub lambda_star: f64,
    /// Root of modulus above one.
    pub lambda_sup: f64,
    pub xi: f64,
}

impl LambdaPair {
    /// `λ^* - λ_* = 2 sgn(ξ) sqrt(ξ² - 1)`.
    pub fn splitting(&self) -> f64 {
        self.xi.signum() * 2.0 * (self.xi * self.xi - 1.0).sqrt()
    }

    /// `ξ λ^* = ξ² + |ξ| sqrt(ξ² - 1)`, free of cancellation.
    pub fn xi_lambda_sup(&self) -> f64 {
        let a = self.xi.abs();
        a * a + a * (a * a - 1.0).sqrt()
    }
}

/// Roots of `λ² - 2ξλ + 1 = 0` for `|ξ| > 1`. The small root is taken from
/// the product identity so large `|ξ|` loses no digits.
pub fn lambda_pair(xi_val: f64) -> Result<LambdaPair> {
    let xi_val = finite("xi", xi_val)?;
    if xi_val.abs() <= 1.0 {
        return Err(SpectralError::BandRegion { xi: xi_val });
    }
    let a = xi_val.abs();
    let big = a + ((a - 1.0) * (a + 1.0)).sqrt();
    let sign = xi_val.signum();
    Ok(LambdaPair {
        lambda_star: sign / big,
        lambda_sup: sign * big,
        xi: xi_val,
    })
}

/// Floquet quasimomentum `θ ∈ [0, 1]` with `cos θπ = ξ`, or `None` in a gap.
pub fn floquet_theta(energy: Energy, bg: &Background) -> Result<Option<f64>> {
    let x = xi(energy, bg)?;
    Ok(theta_from_xi(x))
}

pub(crate) fn theta_from_xi(x: f64) -> Option<f64> {
    (x.abs() <= 1.0).then(|| x.acos() / PI)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(v: f64) -> Energy {
        Energy::new(v).unwrap()
    }

    /// Power series for cosh and sinh, summed until the terms vanish.
    fn series_cosh_sinh(x: f64) -> (f64, f64) {
        let (mut c, mut s) = (0.0, 0.0);
        let mut term = 1.0;
        for n in 0..80 {
            if n % 2 == 0 {
                c += term;
            } else {
                s += term;
            }
            term *= x / (n as f64 + 1.0);
        }
        (c, s)
    }

    #[test]
    fn kernels_at_reference_points() {
        let k0 = trig_kernels(e(0.0), PI).unwrap();
        assert_eq!((k0.c, k0.s), (1.0, PI));

        let k1 = trig_kernels(e(1.0), PI).unwrap();
        assert!((k1.c + 1.0).abs() < 1e-15);
        assert!(k1.s.abs() < 1e-15);

        let (ch, sh) = series_cosh_sinh(PI);
        let km = trig_kernels(e(-1.0), PI).unwrap();
        assert!((km.c - ch).abs() < 1e-12 * ch);
        assert!((km.s - sh).abs() < 1e-12 * sh);
        assert!((ch - 11.591953275521519).abs() < 1e-12);
    }

    #[test]
    fn kernels_reject_bad_input() {
        assert!(trig_kernels(e(1.0), 0.0).is_err());
        assert!(trig_kernels(e(1.0), f64::NAN).is_err());
        assert!(Energy::new(f64::INFINITY).is_err());
    }

    #[test]
    fn pythagorean_identity_on_grid() {
        for i in 0..1000 {
            let ev = -5.0 + 30.0 * i as f64 / 999.0;
            let k = trig_kernels(e(ev), PI).unwrap();
            assert!((k.c * k.c + ev * k.s * k.s - 1.0).abs() < 1e-12 * (k.c * k.c).max(1.0), "E = {ev}");
        }
    }

    #[test]
    fn xi_reference_values() {
        let bg = Background::new(0.0, 1.0 / 3.0);
        assert!(xi(e(0.25), &bg).unwrap().abs() < 1e-15);
        let bg = Background::new(5.0, 1.0 / 3.0);
        assert!((xi(e(1.0), &bg).unwrap() + 2.0).abs() < 1e-14);
        let bg = Background::new(2.0, 0.25);
        let expect = (1.0 + PI / 2.0) * 2f64.sqrt();
        assert!((xi(e(0.0), &bg).unwrap() - expect).abs() < 1e-10);
        assert!((expect - 3.6357).abs() < 1e-4);
    }

    #[test]
    fn xi_degenerate_flux_is_named() {
        let bg = Background::new(1.0, 0.5);
        match xi(e(0.3), &bg) {
            Err(SpectralError::DegenerateFlux { what, .. }) => assert!(what.contains("cos(A")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn xi_continuous_across_threshold() {
        let bg = Background::new(1.7, 0.2);
        let a = xi(e(-1e-8), &bg).unwrap();
        let b = xi(e(1e-8), &bg).unwrap();
        assert!((a - b).abs() < 1e-6);
    }

    #[test]
    fn lambda_pair_examples() {
        let p = lambda_pair(1.25).unwrap();
        assert!((p.lambda_star - 0.5).abs() < 1e-15 && (p.lambda_sup - 2.0).abs() < 1e-15);
        let p = lambda_pair(-2.0).unwrap();
        assert!((p.lambda_star - (-2.0 + 3f64.sqrt())).abs() < 1e-12);
        assert!((p.lambda_sup - (-2.0 - 3f64.sqrt())).abs() < 1e-12);
        assert!(matches!(lambda_pair(1.0), Err(SpectralError::BandRegion { .. })));
        assert!(matches!(lambda_pair(-0.3), Err(SpectralError::BandRegion { .. })));
    }

    #[test]
    fn floquet_theta_examples() {
        let bg = Background::new(0.0, 1.0 / 3.0);
        assert!((floquet_theta(e(0.25), &bg).unwrap().unwrap() - 0.5).abs() < 1e-15);
        let t = floquet_theta(e(1.0 / 9.0), &bg).unwrap().unwrap();
        assert!(t.abs() < 1e-7);
        assert_eq!(floquet_theta(e(-1.0), &bg).unwrap(), None);
    }

    #[test]
    fn admissibility() {
        assert!(e(1.0).check_admissible(PI, 1e-9).is_err());
        assert!(e(4.0).check_admissible(PI, 1e-9).is_err());
        assert!(e(0.0).check_admissible(PI, 1e-9).is_ok());
        assert!(e(-4.0).check_admissible(PI, 1e-9).is_ok());
        assert!(e(1.0 + 1e-6).check_admissible(PI, 1e-9).is_ok());
        // ℓ = π/2 punctures at k = 2, 4, ...
        assert!(e(1.0).check_admissible(PI / 2.0, 1e-9).is_ok());
        assert!(e(4.0).check_admissible(PI / 2.0, 1e-9).is_err());
    }

    #[test]
    fn flat_bands_listed() {
        let bg = Background::new(0.0, 1.0 / 3.0);
        let fb = bg.flat_band_energies(0.0, 10.0);
        assert_eq!(fb.len(), 3);
        for (a, b) in fb.iter().zip([1.0, 4.0, 9.0]) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}

#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn lambda_pair_identities(mag in 1.0f64..1e6, neg in any::<bool>()) {
            prop_assume!(mag > 1.0 + 1e-12);
            let x = if neg { -mag } else { mag };
            let p = lambda_pair(x).unwrap();
            prop_assert!((p.lambda_star * p.lambda_sup - 1.0).abs() < 1e-12);
            prop_assert!((p.lambda_star + p.lambda_sup - 2.0 * x).abs() <= 1e-12 * (2.0 * x).abs());
            prop_assert!(p.lambda_star.abs() < 1.0 && p.lambda_sup.abs() > 1.0);
        }

        #[test]
        fn theta_present_iff_in_band(ev in -5.0f64..25.0, alpha in -3.0f64..3.0, field in -0.45f64..0.45) {
            let bg = Background::new(alpha, field);
            let en = Energy::new(ev).unwrap();
            let x = xi(en, &bg).unwrap();
            match floquet_theta(en, &bg).unwrap() {
                Some(t) => {
                    prop_assert!(x.abs() <= 1.0);
                    prop_assert!(((t * PI).cos() - x).abs() < 1e-12);
                }
                None => prop_assert!(x.abs() > 1.0),
            }
        }
    }
}
