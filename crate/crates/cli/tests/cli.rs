//! Black-box checks of the installed binary: output formats, exit codes,
//! determinism, error reporting.

use std::path::Path;
use std::process::{Command, Output};

const CIRCUIT: &str = r#"{
    "n_modes": 2,
    "init": [0, 0],
    "gates": [
        {"type": "g2", "idx": [1, 4], "angle": 0.3},
        {"type": "g4", "idx": [1, 2, 3, 4], "angle": 0.7853981633974483, "noise_p": 0.02}
    ],
    "observable": {"pauli": "ZZ"}
}"#;

const AMPS: &str = r#"{
    "n_spin_orbitals": 4,
    "occ": [1, 2],
    "virt": [3, 4],
    "t2": [{"a": 3, "b": 4, "i": 1, "j": 2, "t": 0.4}]
}"#;

fn flonl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flonl"))
        .args(args)
        .env_remove("FLONL_RESIDUAL_TOL")
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stderr).expect("stderr is JSON")
}

fn write_temp(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn decompose_quarter_rotation_reports_l1_three() {
    let out = flonl(&["decompose", "--theta", "0.7853981633974483"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc = stdout_json(&out);
    assert!((doc["l1"].as_f64().unwrap() - 3.0).abs() <= 1e-6);
    assert!(doc["residual"].as_f64().unwrap() <= 1e-8);
    assert_eq!(doc["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(doc["target"]["theta"], 0.7853981633974483);
    let weights = doc["weights"].as_array().unwrap();
    assert_eq!(weights.len(), 28);
    assert!(weights.iter().all(|w| w["label"].is_string()));
}

#[test]
fn nonlinearity_sweep_is_versioned_csv() {
    let out = flonl(&[
        "nonlinearity",
        "--theta-grid",
        "0:0.7853981633974483:5",
        "--p",
        "0,0.05",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        format!("# flonl {}", env!("CARGO_PKG_VERSION"))
    );
    assert_eq!(lines.next().unwrap(), "theta,p,W");
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 10);
    // noiseless block: W(0) = 1, increasing up to W(π/4) = 3
    assert!((rows[0][2] - 1.0).abs() <= 1e-9);
    assert!((rows[4][2] - 3.0).abs() <= 1e-6);
    for pair in rows[..5].windows(2) {
        assert!(pair[1][2] >= pair[0][2] - 1e-9);
    }
    // dephasing only cheapens the gate
    for (clean, noisy) in rows[..5].iter().zip(&rows[5..]) {
        assert!(noisy[2] <= clean[2] + 1e-9);
    }
}

#[test]
fn simulate_with_fixed_seed_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let circuit = write_temp(dir.path(), "circuit.json", CIRCUIT);
    let base = flonl(&["simulate", &circuit, "--samples", "20000", "--seed", "7"]);
    assert!(base.status.success(), "{}", String::from_utf8_lossy(&base.stderr));
    let again = flonl(&["simulate", &circuit, "--samples", "20000", "--seed", "7"]);
    let throttled = flonl(&[
        "simulate", &circuit, "--samples", "20000", "--seed", "7", "--workers", "1",
    ]);
    assert_eq!(base.stdout, again.stdout);
    assert_eq!(base.stdout, throttled.stdout);

    let doc = stdout_json(&base);
    assert_eq!(doc["n_samples"], 20000);
    assert_eq!(doc["seed"], 7);
    assert_eq!(doc["version"], env!("CARGO_PKG_VERSION"));

    let reseeded = flonl(&["simulate", &circuit, "--samples", "20000", "--seed", "8"]);
    assert_ne!(base.stdout, reseeded.stdout);
}

#[test]
fn uccsd_cost_writes_report_and_gate_table() {
    let dir = tempfile::tempdir().unwrap();
    let amps = write_temp(dir.path(), "amps.json", AMPS);
    let table = dir.path().join("gates.csv");
    let out = flonl(&[
        "uccsd-cost",
        "--amps",
        &amps,
        "--noise-p",
        "0.02",
        "--extrapolate",
        "12",
        "--csv",
        table.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc = stdout_json(&out);
    assert_eq!(doc["per_gate"].as_array().unwrap().len(), 8);
    assert!(doc["simulatable"].as_bool().unwrap());
    assert!(doc["total_w"].as_f64().unwrap() > 1.0);
    let ext = &doc["extrapolation"];
    assert!(ext["geo_mean_w"].as_f64().unwrap() > 1.0);
    assert_eq!(ext["m"], 12);
    assert!(ext["predicted_log10_w"].as_f64().unwrap() > 0.0);

    let text = std::fs::read_to_string(&table).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# flonl "));
    assert_eq!(lines.next().unwrap(), "gate,angle,p,W");
    assert_eq!(lines.count(), 8);
}

#[test]
fn validate_passes_on_this_build() {
    let out = flonl(&["validate", "--circuits", "40", "--seed", "11"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc = stdout_json(&out);
    let checks = doc["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 5);
    assert!(checks.iter().all(|c| c["passed"].as_bool().unwrap()));
}

#[test]
fn bad_input_exits_four_with_error_json() {
    let out = flonl(&["simulate", "/no/such/circuit.json", "--samples", "10"]);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(stderr_json(&out)["error"]["kind"], "bad-input");

    let out = flonl(&["nonlinearity", "--theta-grid", "nonsense"]);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(stderr_json(&out)["error"]["kind"], "bad-arguments");

    let dir = tempfile::tempdir().unwrap();
    let broken = write_temp(dir.path(), "broken.json", "{\"n_modes\": 0}");
    let out = flonl(&["simulate", &broken, "--samples", "10"]);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(stderr_json(&out)["error"]["kind"], "bad-input");
}

#[test]
fn unreachable_residual_tolerance_exits_two() {
    let out = Command::new(env!("CARGO_BIN_EXE_flonl"))
        .args(["decompose", "--theta", "0.3"])
        .env("FLONL_RESIDUAL_TOL", "1e-30")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"]["kind"], "infeasible-target");
}
