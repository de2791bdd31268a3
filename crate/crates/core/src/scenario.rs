//! Ring-by-ring description of a (possibly perturbed) chain.

use serde::{Deserialize, Serialize};

use crate::dispersion::Background;
use crate::error::{finite, Result, SpectralError};

/// One ring of the chain. `alpha` is the coupling constant at the vertex
/// joining this ring to its left neighbour.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ring {
    pub alpha: f64,
    pub field: f64,
    pub half_length: f64,
}

impl Ring {
    pub fn background(bg: &Background) -> Self {
        Ring {
            alpha: bg.alpha,
            field: bg.field,
            half_length: bg.ell,
        }
    }
}

/// Weak perturbation `α + ε α_j`, `A + ε A_j` on rings `j = 1..n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeakPerturbation {
    pub alphas: Vec<f64>,
    pub fields: Vec<f64>,
    pub epsilon: f64,
}

impl WeakPerturbation {
    pub fn new(alphas: Vec<f64>, fields: Vec<f64>, epsilon: f64) -> Result<Self> {
        let wp = WeakPerturbation {
            alphas,
            fields,
            epsilon,
        };
        wp.validate()?;
        Ok(wp)
    }

    pub fn validate(&self) -> Result<()> {
        if self.alphas.is_empty() || self.alphas.len() != self.fields.len() {
            return Err(SpectralError::InvalidInput(format!(
                "weak perturbation needs n >= 1 equal-length lists, got {} alphas and {} fields",
                self.alphas.len(),
                self.fields.len()
            )));
        }
        for &a in self.alphas.iter().chain(&self.fields) {
            finite("weak perturbation entry", a)?;
        }
        // ε = 0 is accepted as the unperturbed limit.
        if !(0.0..1.0).contains(&self.epsilon) {
            return Err(SpectralError::InvalidInput(format!(
                "epsilon must lie in (0, 1), got {}",
                self.epsilon
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.alphas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphas.is_empty()
    }

    pub fn sum_alpha(&self) -> f64 {
        self.alphas.iter().sum()
    }

    pub fn sum_field(&self) -> f64 {
        self.fields.iter().sum()
    }

    /// Ring `j` (1-based) with the perturbation applied.
    pub(crate) fn ring(&self, bg: &Background, j: usize) -> Ring {
        Ring {
            alpha: bg.alpha + self.epsilon * self.alphas[j - 1],
            field: bg.field + self.epsilon * self.fields[j - 1],
            half_length: bg.ell,
        }
    }
}

/// How weak compact perturbations are solved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeakMode {
    FirstOrder,
    Exact,
}

/// The perturbation applied on top of the periodic background. Perturbed
/// rings are numbered from 1.
#[derive(Debug, Clone, PartialEq)]
pub enum Perturbation {
    None,
    /// Fields `A1`, `A2` on rings 1 and 2.
    TwoRingField { a1: f64, a2: f64 },
    /// Field `A1` on ring 1 and coupling `alpha1` at its left vertex.
    Mixed { alpha1: f64, a1: f64 },
    /// Ring 1 rescaled to half-length `ell1`.
    Geometric { ell1: f64 },
    WeakCompact {
        perturbation: WeakPerturbation,
        mode: WeakMode,
    },
    WeakPeriodic { perturbation: WeakPerturbation },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainScenario {
    pub background: Background,
    pub perturbation: Perturbation,
}

impl ChainScenario {
    pub fn new(background: Background, perturbation: Perturbation) -> Self {
        ChainScenario {
            background,
            perturbation,
        }
    }

    pub fn unperturbed(background: Background) -> Self {
        Self::new(background, Perturbation::None)
    }

    /// Parameters of ring `j`.
    pub fn ring(&self, j: i64) -> Ring {
        let bg = &self.background;
        let base = Ring::background(bg);
        match &self.perturbation {
            Perturbation::None => base,
            Perturbation::TwoRingField { a1, a2 } => match j {
                1 => Ring { field: *a1, ..base },
                2 => Ring { field: *a2, ..base },
                _ => base,
            },
            Perturbation::Mixed { alpha1, a1 } if j == 1 => Ring {
                alpha: *alpha1,
                field: *a1,
                ..base
            },
            Perturbation::Mixed { .. } => base,
            Perturbation::Geometric { ell1 } if j == 1 => Ring {
                half_length: *ell1,
                ..base
            },
            Perturbation::Geometric { .. } => base,
            Perturbation::WeakCompact { perturbation, .. } => {
                if j >= 1 && (j as usize) <= perturbation.len() {
                    perturbation.ring(bg, j as usize)
                } else {
                    base
                }
            }
            Perturbation::WeakPeriodic { perturbation } => {
                let p = perturbation.len() as i64;
                perturbation.ring(bg, ((j - 1).rem_euclid(p) + 1) as usize)
            }
        }
    }

    /// First and last perturbed ring for compactly supported perturbations.
    pub fn support(&self) -> Option<(i64, i64)> {
        match &self.perturbation {
            Perturbation::None | Perturbation::WeakPeriodic { .. } => None,
            Perturbation::TwoRingField { .. } => Some((1, 2)),
            Perturbation::Mixed { .. } | Perturbation::Geometric { .. } => Some((1, 1)),
            Perturbation::WeakCompact { perturbation, .. } => {
                Some((1, perturbation.len() as i64))
            }
        }
    }

    /// Rings `first..first + count`.
    pub fn rings(&self, first: i64, count: usize) -> Vec<Ring> {
        (0..count as i64).map(|i| self.ring(first + i)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn periodic_rings_wrap() {
        let bg = Background::new(1.0, 0.2);
        let wp = WeakPerturbation::new(vec![1.0, -1.0], vec![0.1, 0.0], 0.01).unwrap();
        let sc = ChainScenario::new(bg, Perturbation::WeakPeriodic { perturbation: wp });
        assert_eq!(sc.ring(1), sc.ring(3));
        assert_eq!(sc.ring(0), sc.ring(2));
        assert!((sc.ring(1).alpha - 1.01).abs() < 1e-15);
    }

    #[test]
    fn weak_perturbation_validation() {
        assert!(WeakPerturbation::new(vec![], vec![], 0.1).is_err());
        assert!(WeakPerturbation::new(vec![1.0], vec![0.0, 1.0], 0.1).is_err());
        assert!(WeakPerturbation::new(vec![1.0], vec![0.0], 1.5).is_err());
    }
}
