use thiserror::Error;

/// Errors raised by the spectral engine.
///
/// Degenerate inputs always name the offending quantity so callers can
/// route them (for instance to [`crate::bands::degenerate_point_spectrum`]).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error("non-finite input: {what} = {value}")]
    NonFinite { what: &'static str, value: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(
        "degenerate flux: |{what}| = {value:e} vanishes; the spectrum is pure point, \
         use degenerate_point_spectrum"
    )]
    DegenerateFlux { what: String, value: f64 },

    #[error("band region: |xi| = {xi} <= 1, the energy lies inside a spectral band or at its edge")]
    BandRegion { xi: f64 },

    #[error("momentum k = {k} is excluded from the admissible set (sin(k*{length}) = 0)")]
    Puncture { k: f64, length: f64 },

    #[error("mode unsupported: {0}")]
    ModeUnsupported(String),

    #[error("finite-difference dimension {dimension} exceeds cap {cap}")]
    DimensionCap { dimension: usize, cap: usize },

    #[error("mesh too coarse: step {h} exceeds {limit}")]
    MeshTooCoarse { h: f64, limit: f64 },

    #[error("window [{lo}, {hi}] touches the discretization ceiling {ceiling}")]
    DiscretizationCeiling { lo: f64, hi: f64, ceiling: f64 },

    #[error("singular configuration: {0}")]
    Singular(String),
}

pub type Result<T> = std::result::Result<T, SpectralError>;

pub(crate) fn finite(what: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(SpectralError::NonFinite { what, value })
    }
}
