//! Batch runs: a scenario file in, `report.json` and CSV tables out.
//!
//! Every float is written with 17 significant digits so identical inputs
//! give byte-identical files.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::bands::{band_structure, classify_first_band, BandStructure};
use crate::config::{ConfigError, DispersionConfig, ScenarioConfig};
use crate::dispersion::{floquet_theta, xi, Background, Energy};
use crate::error::SpectralError;
use crate::gap_solvers::{kp_gap_intersection, saxon_hutner_check, solve_scenario, GapEigenvalue};
use crate::oracle::oracle_compare_with;
use crate::scenario::Perturbation;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
/// Energies drawn per gap-intersection interval by `saxon-hutner`.
pub const SAXON_HUTNER_SAMPLES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Bands,
    Solve,
    Dispersion,
    OracleCompare,
    SaxonHutner,
}

impl Command {
    pub fn as_str(self) -> &'static str {
        match self {
            Command::Bands => "bands",
            Command::Solve => "solve",
            Command::Dispersion => "dispersion",
            Command::OracleCompare => "oracle-compare",
            Command::SaxonHutner => "saxon-hutner",
        }
    }
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error("config invalid: {0}")]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
}

impl RunError {
    /// 2 config, 3 degenerate flux, 4 oracle dimension cap, 1 anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Spectral(SpectralError::DegenerateFlux { .. }) => 3,
            RunError::Spectral(SpectralError::DimensionCap { .. }) => 4,
            _ => 1,
        }
    }
}

/// Files written by a run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub files: Vec<PathBuf>,
    pub eigenvalues: Vec<GapEigenvalue>,
}

/// `{:.16e}`: 17 significant digits, round-trip exact.
pub fn fmt17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

/// Pretty JSON whose floats use [`fmt17`].
struct FixedFloats(serde_json::ser::PrettyFormatter<'static>);

macro_rules! delegate {
    ($($name:ident($($arg:ident: $ty:ty),*)),* $(,)?) => {
        $(
            fn $name<W: ?Sized + Write>(&mut self, w: &mut W $(, $arg: $ty)*) -> io::Result<()> {
                self.0.$name(w $(, $arg)*)
            }
        )*
    };
}

impl serde_json::ser::Formatter for FixedFloats {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(fmt17(value).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }

    delegate!(
        begin_array(),
        end_array(),
        begin_array_value(first: bool),
        end_array_value(),
        begin_object(),
        end_object(),
        begin_object_key(first: bool),
        begin_object_value(),
        end_object_value(),
    );
}

/// Serializes with 17-digit floats and a trailing newline.
pub fn to_fixed_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(
        &mut buf,
        FixedFloats(serde_json::ser::PrettyFormatter::new()),
    );
    value.serialize(&mut ser).expect("in-memory JSON serialization");
    buf.push(b'\n');
    String::from_utf8(buf).expect("JSON is UTF-8")
}

/// `band_index,E_lo,E_hi,type`. Flat rows carry `band_index = m` for the
/// flat band at `(m π / ℓ)^2`.
pub fn bands_csv(bs: &BandStructure, bg: &Background) -> String {
    let mut rows: Vec<(f64, String)> = bs
        .bands
        .iter()
        .map(|b| (b.lo, format!("{},{},{},band", b.index, fmt17(b.lo), fmt17(b.hi))))
        .collect();
    let step = std::f64::consts::PI / bg.ell;
    for &e in &bs.flat_bands {
        let m = (e.sqrt() / step).round() as u64;
        rows.push((e, format!("{m},{},{},flat", fmt17(e), fmt17(e))));
    }
    rows.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out = String::from("band_index,E_lo,E_hi,type\n");
    for (_, r) in rows {
        out.push_str(&r);
        out.push('\n');
    }
    out
}

/// `gap_index,E,residual,method`.
pub fn eigenvalues_csv(evs: &[GapEigenvalue]) -> String {
    let mut out = String::from("gap_index,E,residual,method\n");
    for e in evs {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            e.gap_index,
            fmt17(e.energy),
            fmt17(e.residual),
            e.method.as_str()
        );
    }
    out
}

/// Dispersion table `k,E,xi,theta,flat` on a signed-momentum grid
/// (`E = k |k|`); `theta` is blank in gaps, `flat` is 1 on flat-band momenta.
pub fn export_dispersion(bg: &Background, grid: &DispersionConfig) -> Result<String, SpectralError> {
    bg.checked_cos_flux()?;
    let n = ((grid.k_max - grid.k_min) / grid.k_step + 1e-9).floor() as usize;
    let step = std::f64::consts::PI / bg.ell;
    let mut out = String::from("k,E,xi,theta,flat\n");
    for i in 0..=n {
        let k = grid.k_min + i as f64 * grid.k_step;
        let energy = Energy::from_signed_momentum(k)?;
        let x = xi(energy, bg)?;
        let theta = floquet_theta(energy, bg)?.map(fmt17).unwrap_or_default();
        let m = k / step;
        let flat = u8::from(k > 0.0 && (m - m.round()).abs() < 1e-9);
        let _ = writeln!(out, "{},{},{},{theta},{flat}", fmt17(k), fmt17(energy.value()), fmt17(x));
    }
    Ok(out)
}

fn write(out_dir: &Path, name: &str, body: &str, files: &mut Vec<PathBuf>) -> io::Result<()> {
    let p = out_dir.join(name);
    fs::write(&p, body)?;
    files.push(p);
    Ok(())
}

fn flag_residuals(mut evs: Vec<GapEigenvalue>, tol: f64) -> Vec<GapEigenvalue> {
    for e in &mut evs {
        e.warning = (e.residual >= tol).then(|| format!("residual {:.3e} at or above tol {tol:e}", e.residual));
    }
    evs
}

/// Runs `command` on a validated configuration and writes its files into
/// `out_dir` (created if missing). `seed` drives the random energy samples
/// of `saxon-hutner`.
pub fn run_command(
    command: Command,
    cfg: &ScenarioConfig,
    out_dir: &Path,
    seed: u64,
) -> Result<RunOutput, RunError> {
    fs::create_dir_all(out_dir)?;
    let bg = cfg.background();
    bg.checked_cos_flux()?;
    let sc = cfg.scenario();
    let window = (cfg.search.e_min, cfg.search.e_max);
    let mut files = Vec::new();
    let mut report = json!({
        "tool": "ringchain",
        "version": TOOL_VERSION,
        "command": command.as_str(),
        "config": cfg,
    });
    let mut eigenvalues = Vec::new();

    match command {
        Command::Dispersion => {
            let csv = export_dispersion(&bg, &cfg.dispersion)?;
            report["dispersion_rows"] = json!(csv.lines().count() - 1);
            write(out_dir, "dispersion.csv", &csv, &mut files)?;
        }
        Command::SaxonHutner => {
            let Perturbation::WeakPeriodic { perturbation: wp } = &sc.perturbation else {
                return Err(ConfigError {
                    field: "perturbation.type".into(),
                    line: None,
                    column: None,
                    message: "saxon-hutner needs a weak_periodic perturbation".into(),
                }
                .into());
            };
            let rho = kp_gap_intersection(&bg, wp, window)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut csv = String::from("interval,E,exact_trace,first_order_trace,in_gap\n");
            let (mut samples, mut inside) = (0usize, 0usize);
            for (i, &(lo, hi)) in rho.iter().enumerate() {
                for _ in 0..SAXON_HUTNER_SAMPLES {
                    let e = rng.gen_range(lo..hi);
                    let t = saxon_hutner_check(&bg, wp, Energy::new(e)?)?;
                    samples += 1;
                    inside += usize::from(t.in_gap);
                    let _ = writeln!(
                        csv,
                        "{i},{},{},{},{}",
                        fmt17(e),
                        fmt17(t.exact_trace),
                        fmt17(t.first_order_trace),
                        u8::from(t.in_gap)
                    );
                }
            }
            report["seed"] = json!(seed);
            report["gap_intersection"] = json!(rho);
            report["samples"] = json!(samples);
            report["samples_in_gap"] = json!(inside);
            write(out_dir, "saxon_hutner.csv", &csv, &mut files)?;
        }
        Command::Bands | Command::Solve | Command::OracleCompare => {
            let bs = band_structure(&bg, window)?;
            report["band_structure"] = serde_json::to_value(&bs).map_err(io::Error::other)?;
            report["first_band"] = serde_json::to_value(classify_first_band(&bg)?).map_err(io::Error::other)?;
            write(out_dir, "bands.csv", &bands_csv(&bs, &bg), &mut files)?;
            if command != Command::Bands {
                let evs: Vec<GapEigenvalue> = solve_scenario(&sc, cfg.search.max_gap)?
                    .into_iter()
                    .filter(|e| e.energy >= window.0 && e.energy <= window.1)
                    .collect();
                eigenvalues = flag_residuals(evs, cfg.search.tol);
                report["eigenvalues"] = serde_json::to_value(&eigenvalues).map_err(io::Error::other)?;
                if let Perturbation::WeakPeriodic { perturbation } = &sc.perturbation {
                    report["gap_intersection"] = json!(kp_gap_intersection(&bg, perturbation, window)?);
                }
                write(out_dir, "eigenvalues.csv", &eigenvalues_csv(&eigenvalues), &mut files)?;
                if command == Command::OracleCompare || cfg.oracle.enabled {
                    let o = &cfg.oracle;
                    let rep = oracle_compare_with(&sc, o.h, o.n_rings, &eigenvalues, o.dimension_cap)?;
                    report["oracle"] = serde_json::to_value(&rep).map_err(io::Error::other)?;
                }
            }
        }
    }

    write(out_dir, "report.json", &to_fixed_json(&report), &mut files)?;
    Ok(RunOutput { files, eigenvalues })
}

/// Loads `config_path` and runs `solve`.
pub fn run_scenario(config_path: &Path, out_dir: &Path) -> Result<RunOutput, RunError> {
    let cfg = ScenarioConfig::from_path(config_path)?;
    run_command(Command::Solve, &cfg, out_dir, 0)
}

/// Echoed configuration of a written report.
pub fn echoed_config(report_json: &str) -> Result<ScenarioConfig, ConfigError> {
    let v: Value = serde_json::from_str(report_json).map_err(|e| ConfigError {
        field: "<report>".into(),
        line: Some(e.line()),
        column: Some(e.column()),
        message: e.to_string(),
    })?;
    ScenarioConfig::from_json(&v["config"].to_string())
}
