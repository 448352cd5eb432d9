use std::path::Path;
use std::process::{Command, Output};

fn specmult(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_specmult")).args(args).output().expect("binary runs")
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("config.json");
    std::fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn lists_every_experiment() {
    let out = specmult(&["list-experiments"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in specmult::experiments::names() {
        assert!(text.contains(name), "{name} missing from listing");
    }
}

#[test]
fn runs_a_small_riesz_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"experiment": "riesz-dim-sweep", "sweep": {"K": [4], "d": [1, 2], "p": [2.0]}, "seed": 3, "output": "out"}"#,
    );
    let out = specmult(&["run", &cfg]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("out/riesz-dim-sweep.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("K,d,p,r,estimator,value,seed"));
    let exact: Vec<f64> = lines
        .filter(|l| l.contains(",exact,"))
        .map(|l| l.split(',').nth(5).unwrap().parse().unwrap())
        .collect();
    assert!(!exact.is_empty());
    for v in exact {
        assert!((v - std::f64::consts::SQRT_2).abs() < 1e-10);
    }
}

#[test]
fn empty_sweep_writes_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"experiment": "riesz-dim-sweep", "sweep": {"K": [], "d": [1], "p": [2.0]}, "output": "out"}"#,
    );
    let out = specmult(&["run", &cfg]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("out/riesz-dim-sweep.csv")).unwrap();
    assert_eq!(csv.trim_end(), "K,d,p,r,estimator,value,seed");
}

#[test]
fn bad_parameters_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        r#"{"experiment": "riesz-dim-sweep", "sweep": {"p": [0.5]}, "output": "out"}"#,
        r#"{"experiment": "no-such-experiment", "output": "out"}"#,
        r#"{"experiment": "riesz-dim-sweep", "bogus": 1, "output": "out"}"#,
        "not json",
    ];
    for body in cases {
        let cfg = write_config(dir.path(), body);
        let out = specmult(&["run", &cfg]);
        assert_eq!(out.status.code(), Some(2), "{body}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn unknown_experiment_names_alternatives() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"experiment": "nope", "output": "out"}"#);
    let err = String::from_utf8(specmult(&["run", &cfg]).stderr).unwrap();
    assert!(err.contains("cz-suite"));
}

#[test]
fn missing_config_is_an_io_error() {
    let out = specmult(&["run", "/nonexistent/specmult/config.json"]);
    assert_eq!(out.status.code(), Some(1));
}
