use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use ringchain::report::echoed_config;
use ringchain::ScenarioConfig;
use tempfile::TempDir;

fn run(sub: &str, config: &str, out: &Path) -> Output {
    let cfg = out.join("config.json");
    fs::write(&cfg, config).unwrap();
    Command::new(env!("CARGO_BIN_EXE_ringchain"))
        .args([sub, "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(out)
        .args(["--seed", "7"])
        .output()
        .unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const TWO_RING: &str = r#"{"background": {"alpha": 0, "A": 0.3333333333333333},
  "perturbation": {"type": "two_ring_field", "A1": 0, "A2": 0},
  "search": {"E_min": -50, "E_max": 10}}"#;

#[test]
fn solve_writes_gap_eigenvalue() {
    let dir = TempDir::new().unwrap();
    let o = run("solve", TWO_RING, dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = fs::read_to_string(dir.path().join("eigenvalues.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("gap_index,E,residual,method"));
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(first[0], "1");
    let e: f64 = first[1].parse().unwrap();
    assert!((e - 0.0516).abs() < 1e-3, "{e}");
    assert!(dir.path().join("bands.csv").exists());
    assert!(dir.path().join("report.json").exists());
}

#[test]
fn degenerate_flux_exits_three() {
    let dir = TempDir::new().unwrap();
    let o = run("bands", r#"{"background": {"alpha": 1, "A": 0.5}}"#, dir.path());
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("cos(A*pi)"), "{}", stderr(&o));
}

#[test]
fn unperturbed_chain_has_header_only_eigenvalues() {
    let dir = TempDir::new().unwrap();
    let o = run(
        "solve",
        r#"{"background": {"alpha": 1, "A": 0.2}, "perturbation": {"type": "none"}}"#,
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = fs::read_to_string(dir.path().join("eigenvalues.csv")).unwrap();
    assert_eq!(csv, "gap_index,E,residual,method\n");
}

#[test]
fn repeated_runs_are_byte_identical_and_echo_the_config() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    assert!(run("solve", TWO_RING, a.path()).status.success());
    assert!(run("solve", TWO_RING, b.path()).status.success());
    for f in ["report.json", "bands.csv", "eigenvalues.csv"] {
        assert_eq!(
            fs::read(a.path().join(f)).unwrap(),
            fs::read(b.path().join(f)).unwrap(),
            "{f}"
        );
    }
    let report = fs::read_to_string(a.path().join("report.json")).unwrap();
    let echoed = echoed_config(&report).unwrap();
    assert_eq!(echoed, ScenarioConfig::from_json(TWO_RING).unwrap());
}

#[test]
fn invalid_field_exits_two_with_location() {
    let dir = TempDir::new().unwrap();
    let o = run("bands", r#"{"background": {"alpha": "x", "A": 0.2}}"#, dir.path());
    assert_eq!(o.status.code(), Some(2));
    let msg = stderr(&o);
    assert!(msg.contains("background.alpha") && msg.contains("line 1"), "{msg}");
}

#[test]
fn oracle_dimension_cap_exits_four() {
    let dir = TempDir::new().unwrap();
    let cfg = r#"{"background": {"alpha": 0, "A": 0.3333333333333333},
      "perturbation": {"type": "two_ring_field", "A1": 0, "A2": 0},
      "oracle": {"enabled": true, "h": 0.05, "n_rings": 21, "dimension_cap": 100}}"#;
    let o = run("solve", cfg, dir.path());
    assert_eq!(o.status.code(), Some(4), "{}", stderr(&o));
}

#[test]
fn dispersion_and_saxon_hutner_write_tables() {
    let dir = TempDir::new().unwrap();
    let o = run(
        "dispersion",
        r#"{"background": {"alpha": 1, "A": 0.2}, "dispersion": {"k_min": -1, "k_max": 1, "k_step": 0.5}}"#,
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = fs::read_to_string(dir.path().join("dispersion.csv")).unwrap();
    assert!(csv.starts_with("k,E,xi,theta,flat\n"));
    assert_eq!(csv.lines().count(), 6);

    let dir = TempDir::new().unwrap();
    let o = run(
        "saxon-hutner",
        r#"{"background": {"alpha": 1, "A": 0.2},
           "perturbation": {"type": "weak_periodic", "alphas": [0.5, -0.3], "fields": [0.1, 0.0], "epsilon": 0.1},
           "search": {"E_min": -20, "E_max": 20}}"#,
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(dir.path().join("saxon_hutner.csv").exists());

    let o = run("saxon-hutner", r#"{"background": {"alpha": 1, "A": 0.2}}"#, dir.path());
    assert_eq!(o.status.code(), Some(2));
}
