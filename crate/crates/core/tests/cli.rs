use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI};
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use holoqc::cli::{matrix_from_json, matrix_json};
use holoqc::{CMatrix, C64};
use serde_json::Value;

fn holoqc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_holoqc")).args(args).output().expect("binary runs")
}

fn json_of(args: &[&str]) -> Value {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let out = holoqc(&full);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

fn scratch(name: &str) -> PathBuf {
    Path::new(env!("CARGO_TARGET_TMPDIR")).join(name)
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn diag4(last: C64) -> CMatrix {
    CMatrix::from_diag(&[c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), last])
}

#[test]
fn connection_examples() {
    let v = json_of(&["connection", "--model", "grassmann", "--point", &format!("{FRAC_PI_2},0.4"), "--coord", "phi"]);
    let a = matrix_from_json(&v["matrix"]).unwrap();
    let expected = CMatrix::from_diag(&[c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, -1.0)]);
    assert!(a.distance(&expected) < 1e-12);

    let v = json_of(&["connection", "--model", "grassmann", "--point", "1.234,-0.5", "--coord", "theta"]);
    assert!(matrix_from_json(&v["matrix"]).unwrap().max_abs() < 1e-15);

    let v = json_of(&["connection", "--model", "cp2", "--point", "0,0,0,0", "--coord", "phi1"]);
    let a = matrix_from_json(&v["matrix"]).unwrap();
    assert_eq!(a.dim(), 2);
    assert!(a.max_abs() < 1e-15);
}

#[test]
fn connection_bad_flags() {
    assert_eq!(holoqc(&["connection", "--model", "torus", "--point", "0,0", "--coord", "phi"]).status.code(), Some(1));
    assert_eq!(holoqc(&["connection", "--model", "cp2", "--point", "0,0,0,0"]).status.code(), Some(1));
    // Well-formed flags with values the model rejects.
    assert_eq!(holoqc(&["connection", "--model", "cp2", "--point", "0,0", "--coord", "phi1"]).status.code(), Some(3));
    assert_eq!(holoqc(&["connection", "--model", "cp2", "--point", "0,0,0,0", "--coord", "theta"]).status.code(), Some(3));
}

#[test]
fn holonomy_examples() {
    let v = json_of(&["holonomy", "--plane", "grassmann", "--rect", &format!("{FRAC_PI_2},{PI}")]);
    let g = matrix_from_json(&v["unitary"]).unwrap();
    assert!(g.distance(&diag4(c(-1.0, 0.0))) < 1e-8);
    assert_eq!(v["converged"], Value::Bool(true));
    assert!(v["steps_used"].as_u64().unwrap() > 0);
    assert!(v["estimated_error"].as_f64().unwrap() <= 1e-10);

    let v = json_of(&["holonomy", "--plane", "theta-phi-1", "--rect", "0,0"]);
    assert_eq!(matrix_from_json(&v["unitary"]).unwrap(), CMatrix::identity(2));
}

#[test]
fn holonomy_forced_failure_exits_two_with_estimate() {
    let out = holoqc(&[
        "--format", "json", "holonomy", "--plane", "grassmann", "--rect", &format!("{FRAC_PI_2},{PI}"),
        "--tol", "1e-30", "--max-steps", "16",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["converged"], Value::Bool(false));
    assert!(matrix_from_json(&v["unitary"]).unwrap().distance(&diag4(c(-1.0, 0.0))) < 1e-8);
    assert!(String::from_utf8_lossy(&out.stderr).contains("did not converge"));
}

#[test]
fn evolve_reports_leakage_and_deviation() {
    let v = json_of(&["evolve", "--plane", "theta-phi-2", "--rect", "0.5,0.8", "--time", "200", "--steps", "4000"]);
    assert!(v["leakage"].as_f64().unwrap() < 1e-2);
    assert!(v["deviation"].as_f64().unwrap() < 5e-2);
    let text = holoqc(&["evolve", "--plane", "grassmann", "--rect", "1,1", "--time", "5", "--steps", "50"]);
    let s = String::from_utf8(text.stdout).unwrap();
    assert!(s.contains("leakage") && s.contains("deviation"));

    assert_eq!(holoqc(&["evolve", "--plane", "grassmann", "--rect", "1,1", "--time", "-1", "--steps", "5"]).status.code(), Some(1));
    assert_eq!(holoqc(&["evolve", "--plane", "grassmann", "--rect", "1,1", "--time", "1", "--steps", "0"]).status.code(), Some(1));
}

fn target_arg(m: &CMatrix) -> String {
    m.as_slice().iter().flat_map(|z| [z.re, z.im]).map(|x| format!("{x:?}")).collect::<Vec<_>>().join(",")
}

#[test]
fn synth_examples() {
    let v = json_of(&["synth", "--target", "1,0,0,0,0,0,1,0"]);
    assert_eq!(v["version"], 1);
    assert!(v["steps"].as_array().unwrap().is_empty());

    let (cs, sn) = (FRAC_PI_4.cos(), FRAC_PI_4.sin());
    let rot = CMatrix::from_rows(vec![vec![c(cs, 0.0), c(-sn, 0.0)], vec![c(sn, 0.0), c(cs, 0.0)]]).unwrap();
    let v = json_of(&["synth", "--target", &target_arg(&rot)]);
    let steps = v["steps"].as_array().unwrap();
    assert_eq!(steps.len(), 1);
    assert_eq!(steps[0]["plane"], "theta1-theta2-phi0");
    assert!((steps[0]["area"].as_f64().unwrap() - FRAC_PI_4).abs() < 1e-15);

    let out = holoqc(&["synth", "--target", "1,0,0,0,0,0,2,0"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(out.stdout.is_empty());
    assert_eq!(holoqc(&["synth", "--target", "1,0,0"]).status.code(), Some(3));
}

#[test]
fn synth_then_run_round_trips() {
    let u = CMatrix::from_rows(vec![
        vec![c(0.36, 0.48), c(0.8, 0.0)],
        vec![c(-0.8, 0.0), c(0.36, -0.48)],
    ])
    .unwrap();
    let u = u.scale(C64::from_polar(1.0, 0.3));
    let hadamard = CMatrix::from_rows(vec![
        vec![c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)],
        vec![c(FRAC_1_SQRT_2, 0.0), c(-FRAC_1_SQRT_2, 0.0)],
    ])
    .unwrap();
    for (i, m) in [u, hadamard].iter().enumerate() {
        let out = holoqc(&["synth", "--target", &target_arg(m)]);
        assert_eq!(out.status.code(), Some(0));
        let path = scratch(&format!("synth_{i}.json"));
        std::fs::write(&path, &out.stdout).unwrap();
        let v = json_of(&["run", path.to_str().unwrap()]);
        assert!(matrix_from_json(&v["unitary"]).unwrap().distance(m) < 1e-8);
    }
}

#[test]
fn run_examples() {
    let v = json_of(&["run", &data("cphase.json")]);
    assert!(matrix_from_json(&v["unitary"]).unwrap().distance(&diag4(c(-1.0, 0.0))) < 1e-12);
    let v = json_of(&["run", &data("empty.json")]);
    assert_eq!(matrix_from_json(&v["unitary"]).unwrap(), CMatrix::identity(2));

    assert_eq!(holoqc(&["run", &data("bad_version.json")]).status.code(), Some(3));
    assert_eq!(holoqc(&["run", &data("does_not_exist.json")]).status.code(), Some(3));
    let garbage = scratch("garbage.json");
    std::fs::write(&garbage, "{\"version\":1,\"num_qubits\":1,\"steps\":[],\"colour\":\"red\"}").unwrap();
    assert_eq!(holoqc(&["run", garbage.to_str().unwrap()]).status.code(), Some(3));
}

#[test]
fn closure_dimensions() {
    assert_eq!(json_of(&["closure", "--qubits", "1"])["dimension"], 4);
    assert_eq!(json_of(&["closure", "--qubits", "2"])["dimension"], 16);
    assert_eq!(holoqc(&["closure", "--qubits", "0"]).status.code(), Some(1));
}

#[test]
fn usage_and_help() {
    assert_eq!(holoqc(&[]).status.code(), Some(1));
    assert_eq!(holoqc(&["frobnicate"]).status.code(), Some(1));
    let help = holoqc(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&help.stdout).contains("holonomy"));
    assert_eq!(holoqc(&["--version"]).status.code(), Some(0));
}

#[test]
fn json_matrices_round_trip_exactly() {
    let out = holoqc(&["--format", "json", "run", &data("mixed.json")]);
    let text = String::from_utf8(out.stdout).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    let m = matrix_from_json(&v["unitary"]).unwrap();
    assert_eq!(matrix_json(&m), v["unitary"]);
    assert_eq!(serde_json::to_string(&matrix_json(&m)).unwrap(), serde_json::to_string(&v["unitary"]).unwrap());
}
