use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn hpball(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hpball")).args(args).output().expect("binary runs")
}

fn json_in(dir: &Path, name: &str) -> Value {
    serde_json::from_slice(&std::fs::read(dir.join(name)).expect("output written")).expect("valid json")
}

#[test]
fn default_verify_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = hpball(&["verify", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc = json_in(dir.path(), "verify.json");
    assert_eq!(doc["passed"], true);
    assert_eq!(doc["failures"], 0);
}

#[test]
fn tight_tolerance_fails_with_margins() {
    let dir = tempfile::tempdir().unwrap();
    let out = hpball(&["verify", "--dims", "2", "--tol", "1e-15", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let doc = json_in(dir.path(), "verify.json");
    let failed: Vec<&Value> = doc["cases"].as_array().unwrap().iter().filter(|c| c["passed"] == false).collect();
    assert!(!failed.is_empty());
    assert!(failed.iter().all(|c| c["margin"].as_f64().unwrap() < 0.0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("margin"));
}

#[test]
fn corrupted_pair_file_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pair.json");
    std::fs::write(&path, "{\"psi\": [1, 2").unwrap();
    let out = hpball(&["essnorm", "--pair", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}

#[test]
fn bad_schedule_and_unknown_pair_are_usage_errors() {
    assert_eq!(hpball(&["essnorm", "--schedule-eps", "0.01,0.1"]).status.code(), Some(2));
    assert_eq!(hpball(&["essnorm", "--pair", "no-such-pair"]).status.code(), Some(2));
    assert_eq!(hpball(&["essnorm", "--p", "-1"]).status.code(), Some(2));
}

#[test]
fn identity_into_h2_has_essential_norm_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = hpball(&["essnorm", "--pair", "identity", "--p", "inf", "--q", "2", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_in(dir.path(), "essnorm.json");
    let exact = doc["result"]["reports"][0]["exact"].as_f64().unwrap();
    assert!((exact - 1.0).abs() < 1e-9);
    assert_eq!(doc["result"]["verdict"]["verdict"], "non-compact");
    assert!(!doc["criterion_citations"].as_array().unwrap().is_empty());
    assert_eq!(doc["config"]["seed"], 0);
    assert!(dir.path().join("essnorm-extreme-set-sigma-mass.csv").exists());
}

#[test]
fn cusp_into_hinf_is_compact() {
    let out = hpball(&["essnorm", "--pair", "cusp", "--p", "2", "--q", "inf"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["result"]["verdict"]["verdict"], "compact");
}

#[test]
fn half_dilation_is_bounded_into_hinf() {
    let out = hpball(&["bounded", "--pair", "half", "--p", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["result"]["bounded"], true);
    let sup = doc["result"]["sup"].as_f64().unwrap();
    assert!((sup - (4.0f64 / 3.0).sqrt()).abs() < 1e-3);
}

#[test]
fn blaschke_into_h4_gives_a_bracket_with_traces() {
    let dir = tempfile::tempdir().unwrap();
    let out = hpball(&["essnorm", "--pair", "blaschke-half", "--q", "4", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_in(dir.path(), "essnorm.json");
    let report = &doc["result"]["reports"][0];
    let (lo, hi) = (report["lower"]["value"].as_f64().unwrap(), report["upper"]["value"].as_f64().unwrap());
    assert!((lo - 0.5).abs() < 1e-6 && (hi - 2.0).abs() < 1e-6);
    assert!(dir.path().join("essnorm-extreme-set-mu-mass.csv").exists());
}

#[test]
fn identity_carleson_reports() {
    let out = hpball(&["carleson", "--pair", "identity", "--p", "2", "--q", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["result"]["report"]["bounded"], true);
    assert!((doc["result"]["report"]["berezin"]["value"].as_f64().unwrap() - 1.0).abs() < 1e-6);

    let out = hpball(&["carleson", "--pair", "identity", "--p", "2", "--q", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    let report = &doc["result"]["report"];
    assert_eq!(report["bounded"], false);
    for key in ["box_finite", "berezin_finite", "corpus_finite"] {
        assert_eq!(report["indicators"][key], false);
    }

    assert_eq!(hpball(&["carleson", "--pair", "identity", "--p", "4", "--q", "2"]).status.code(), Some(2));
}

#[test]
fn uncovered_regime_names_the_nearest_result() {
    let out = hpball(&["essnorm", "--p", "inf", "--q", "inf"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nearest"));
}

#[test]
fn outputs_do_not_depend_on_the_directory() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let out = hpball(&["report", "--pair", "edge", "--p", "2", "--q", "2", "--out", d.path().to_str().unwrap()]);
        assert!(matches!(out.status.code(), Some(0) | Some(1)));
    }
    let read = |d: &tempfile::TempDir| std::fs::read(d.path().join("report.json")).unwrap();
    assert_eq!(read(&a), read(&b));
}
