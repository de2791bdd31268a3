//! Scenario files: a JSON tree describing the background, one perturbation
//! and the search, oracle and dispersion settings.

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dispersion::Background;
use crate::oracle::DIMENSION_CAP;
use crate::scenario::{ChainScenario, Perturbation, WeakMode, WeakPerturbation};

/// Invalid configuration, located by field path and, for syntax and type
/// errors, by line and column.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{}{field}: {message}", location(*.line, *.column))]
pub struct ConfigError {
    pub field: String,
    pub line: Option<usize>,
    pub column: Option<usize>,
    pub message: String,
}

fn location(line: Option<usize>, column: Option<usize>) -> String {
    match (line, column) {
        (Some(l), Some(c)) => format!("line {l}, column {c}: "),
        _ => String::new(),
    }
}

impl ConfigError {
    fn field(field: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError {
            field: field.into(),
            line: None,
            column: None,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BackgroundConfig {
    pub alpha: f64,
    #[serde(rename = "A")]
    pub field: f64,
    #[serde(default = "default_ell")]
    pub ell: f64,
}

fn default_ell() -> f64 {
    PI
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum PerturbationConfig {
    None,
    TwoRingField {
        #[serde(rename = "A1")]
        a1: f64,
        #[serde(rename = "A2")]
        a2: f64,
    },
    Mixed {
        alpha1: f64,
        #[serde(rename = "A1")]
        a1: f64,
    },
    Geometric {
        ell1: f64,
    },
    WeakCompact {
        alphas: Vec<f64>,
        fields: Vec<f64>,
        epsilon: f64,
        #[serde(default = "default_mode")]
        mode: WeakMode,
    },
    WeakPeriodic {
        alphas: Vec<f64>,
        fields: Vec<f64>,
        epsilon: f64,
    },
}

fn default_mode() -> WeakMode {
    WeakMode::Exact
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchConfig {
    #[serde(rename = "E_min", default = "default_e_min")]
    pub e_min: f64,
    #[serde(rename = "E_max", default = "default_e_max")]
    pub e_max: f64,
    #[serde(default = "default_max_gap")]
    pub max_gap: usize,
    /// Residuals at or above this are flagged in the report.
    #[serde(default = "default_tol")]
    pub tol: f64,
}

fn default_e_min() -> f64 {
    -1e4
}
fn default_e_max() -> f64 {
    100.0
}
fn default_max_gap() -> usize {
    6
}
fn default_tol() -> f64 {
    crate::gap_solvers::RESIDUAL_LIMIT
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            e_min: default_e_min(),
            e_max: default_e_max(),
            max_gap: default_max_gap(),
            tol: default_tol(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleConfig {
    #[serde(default)]
    pub enabled: bool,
    #[serde(default = "default_h")]
    pub h: f64,
    #[serde(default = "default_n_rings")]
    pub n_rings: usize,
    #[serde(default = "default_cap")]
    pub dimension_cap: usize,
}

fn default_h() -> f64 {
    PI / 512.0
}
fn default_n_rings() -> usize {
    21
}
fn default_cap() -> usize {
    DIMENSION_CAP
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            enabled: false,
            h: default_h(),
            n_rings: default_n_rings(),
            dimension_cap: default_cap(),
        }
    }
}

/// Signed-momentum grid for dispersion export; `E = k |k|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DispersionConfig {
    #[serde(default)]
    pub k_min: f64,
    #[serde(default = "default_k_max")]
    pub k_max: f64,
    #[serde(default = "default_k_step")]
    pub k_step: f64,
}

fn default_k_max() -> f64 {
    3.0
}
fn default_k_step() -> f64 {
    1e-3
}

impl Default for DispersionConfig {
    fn default() -> Self {
        DispersionConfig {
            k_min: 0.0,
            k_max: default_k_max(),
            k_step: default_k_step(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub background: BackgroundConfig,
    #[serde(default = "default_perturbation")]
    pub perturbation: PerturbationConfig,
    #[serde(default)]
    pub search: SearchConfig,
    #[serde(default)]
    pub oracle: OracleConfig,
    #[serde(default)]
    pub dispersion: DispersionConfig,
}

fn default_perturbation() -> PerturbationConfig {
    PerturbationConfig::None
}

impl ScenarioConfig {
    /// Parses and validates a JSON document.
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let cfg: ScenarioConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            ConfigError {
                field: if path == "." { "<root>".into() } else { path },
                line: Some(inner.line()),
                column: Some(inner.column()),
                message: strip_position(&inner.to_string()),
            }
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            ConfigError::field("<file>", format!("cannot read {}: {e}", path.display()))
        })?;
        Self::from_json(&text)
    }

    /// Range and consistency checks on every numeric field.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let finite = |name: &str, v: f64| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(ConfigError::field(name, format!("must be finite, got {v}")))
            }
        };
        let positive = |name: &str, v: f64| {
            finite(name, v)?;
            if v > 0.0 {
                Ok(())
            } else {
                Err(ConfigError::field(name, format!("must be positive, got {v}")))
            }
        };
        let bg = &self.background;
        finite("background.alpha", bg.alpha)?;
        finite("background.A", bg.field)?;
        positive("background.ell", bg.ell)?;

        match &self.perturbation {
            PerturbationConfig::None => {}
            PerturbationConfig::TwoRingField { a1, a2 } => {
                finite("perturbation.A1", *a1)?;
                finite("perturbation.A2", *a2)?;
            }
            PerturbationConfig::Mixed { alpha1, a1 } => {
                finite("perturbation.alpha1", *alpha1)?;
                finite("perturbation.A1", *a1)?;
            }
            PerturbationConfig::Geometric { ell1 } => positive("perturbation.ell1", *ell1)?,
            PerturbationConfig::WeakCompact {
                alphas,
                fields,
                epsilon,
                ..
            }
            | PerturbationConfig::WeakPeriodic {
                alphas,
                fields,
                epsilon,
            } => {
                if alphas.is_empty() {
                    return Err(ConfigError::field("perturbation.alphas", "must not be empty"));
                }
                if alphas.len() != fields.len() {
                    return Err(ConfigError::field(
                        "perturbation.fields",
                        format!("has {} entries, alphas has {}", fields.len(), alphas.len()),
                    ));
                }
                for (i, a) in alphas.iter().enumerate() {
                    finite(&format!("perturbation.alphas[{i}]"), *a)?;
                }
                for (i, a) in fields.iter().enumerate() {
                    finite(&format!("perturbation.fields[{i}]"), *a)?;
                }
                finite("perturbation.epsilon", *epsilon)?;
                if !(0.0..1.0).contains(epsilon) {
                    return Err(ConfigError::field(
                        "perturbation.epsilon",
                        format!("must lie in [0, 1), got {epsilon}"),
                    ));
                }
            }
        }

        let s = &self.search;
        finite("search.E_min", s.e_min)?;
        finite("search.E_max", s.e_max)?;
        if s.e_min >= s.e_max {
            return Err(ConfigError::field(
                "search.E_max",
                format!("must exceed E_min = {}", s.e_min),
            ));
        }
        positive("search.tol", s.tol)?;

        let o = &self.oracle;
        positive("oracle.h", o.h)?;
        if o.n_rings.is_multiple_of(2) {
            return Err(ConfigError::field(
                "oracle.n_rings",
                format!("must be odd, got {}", o.n_rings),
            ));
        }

        let d = &self.dispersion;
        finite("dispersion.k_min", d.k_min)?;
        finite("dispersion.k_max", d.k_max)?;
        positive("dispersion.k_step", d.k_step)?;
        if d.k_min > d.k_max {
            return Err(ConfigError::field(
                "dispersion.k_max",
                format!("must not be below k_min = {}", d.k_min),
            ));
        }
        Ok(())
    }

    pub fn background(&self) -> Background {
        Background::with_ell(self.background.alpha, self.background.field, self.background.ell)
    }

    pub fn scenario(&self) -> ChainScenario {
        let perturbation = match &self.perturbation {
            PerturbationConfig::None => Perturbation::None,
            PerturbationConfig::TwoRingField { a1, a2 } => Perturbation::TwoRingField { a1: *a1, a2: *a2 },
            PerturbationConfig::Mixed { alpha1, a1 } => Perturbation::Mixed {
                alpha1: *alpha1,
                a1: *a1,
            },
            PerturbationConfig::Geometric { ell1 } => Perturbation::Geometric { ell1: *ell1 },
            PerturbationConfig::WeakCompact {
                alphas,
                fields,
                epsilon,
                mode,
            } => Perturbation::WeakCompact {
                perturbation: weak(alphas, fields, *epsilon),
                mode: *mode,
            },
            PerturbationConfig::WeakPeriodic {
                alphas,
                fields,
                epsilon,
            } => Perturbation::WeakPeriodic {
                perturbation: weak(alphas, fields, *epsilon),
            },
        };
        ChainScenario::new(self.background(), perturbation)
    }
}

fn weak(alphas: &[f64], fields: &[f64], epsilon: f64) -> WeakPerturbation {
    WeakPerturbation {
        alphas: alphas.to_vec(),
        fields: fields.to_vec(),
        epsilon,
    }
}

/// serde_json appends " at line L column C"; the position is reported
/// separately.
fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO_RING: &str = r#"{
        "background": {"alpha": 0.0, "A": 0.3333333333333333},
        "perturbation": {"type": "two_ring_field", "A1": 0.0, "A2": 0.0}
    }"#;

    #[test]
    fn defaults_fill_missing_sections() {
        let c = ScenarioConfig::from_json(TWO_RING).unwrap();
        assert_eq!(c.background.ell, PI);
        assert_eq!(c.search.max_gap, 6);
        assert!(!c.oracle.enabled);
        assert_eq!(c.oracle.n_rings, 21);
    }

    #[test]
    fn round_trips_through_json() {
        let c = ScenarioConfig::from_json(TWO_RING).unwrap();
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(ScenarioConfig::from_json(&text).unwrap(), c);
    }

    #[test]
    fn type_errors_name_the_field_and_line() {
        let bad = "{\n \"background\": {\"alpha\": 0.0, \"A\": \"x\"}\n}";
        let e = ScenarioConfig::from_json(bad).unwrap_err();
        assert_eq!(e.field, "background.A");
        assert_eq!(e.line, Some(2));
        assert!(e.to_string().contains("background.A"));
    }

    #[test]
    fn unknown_fields_and_types_are_rejected() {
        let e = ScenarioConfig::from_json(r#"{"background": {"alpha": 0, "A": 0.1, "B": 1}}"#).unwrap_err();
        assert!(e.field.starts_with("background"), "{e}");
        let e = ScenarioConfig::from_json(
            r#"{"background": {"alpha": 0, "A": 0.1}, "perturbation": {"type": "spiral"}}"#,
        )
        .unwrap_err();
        assert!(e.field.starts_with("perturbation"), "{e}");
    }

    #[test]
    fn range_errors_name_the_field() {
        let e = ScenarioConfig::from_json(
            r#"{"background": {"alpha": 0, "A": 0.1},
                "perturbation": {"type": "weak_compact", "alphas": [1, 2], "fields": [0], "epsilon": 0.01}}"#,
        )
        .unwrap_err();
        assert_eq!(e.field, "perturbation.fields");
        let e = ScenarioConfig::from_json(r#"{"background": {"alpha": 0, "A": 0.1, "ell": -1}}"#).unwrap_err();
        assert_eq!(e.field, "background.ell");
        let e = ScenarioConfig::from_json(r#"{"background": {"alpha": 0, "A": 0.1}, "oracle": {"n_rings": 4}}"#)
            .unwrap_err();
        assert_eq!(e.field, "oracle.n_rings");
    }
}
