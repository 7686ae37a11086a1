use std::path::Path;
use std::process::{Command, Output};

use fermion_encodings::encodings::{build_dk, Encoding};
use fermion_encodings::error_analysis::classify;
use fermion_encodings::lattice::{build_lattice, Boundary};
use fermion_encodings::PauliOp;
use serde_json::Value;

fn fenc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fenc")).args(args).output().unwrap()
}

fn json_stdout(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn inconsistent_flags_are_usage_errors() {
    let cases: [&[&str]; 5] = [
        &["build", "--enc", "vc", "--rows", "4", "--cols", "4", "--boundary", "periodic"],
        &["classify", "--enc", "dk", "--rows", "3", "--cols", "3", "--weight", "3"],
        &["build", "--enc", "jw", "--modes", "4", "--swap-first-pair"],
        &["build", "--enc", "vc", "--rows", "3", "--cols", "3", "--shave", "top-left"],
        &["build", "--enc", "dk"],
    ];
    for args in cases {
        let out = fenc(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
    assert_eq!(fenc(&["--help"]).status.code(), Some(0));
}

#[test]
fn build_reports_register_sizes() {
    let torus = json_stdout(&fenc(&["build", "--enc", "dk", "--rows", "4", "--cols", "4", "--boundary", "periodic"]));
    assert_eq!(torus["n_qubits"], 24);
    let vc = json_stdout(&fenc(&["build", "--enc", "vc", "--rows", "3", "--cols", "3"]));
    assert_eq!(vc["n_qubits"], 18);
    assert_eq!(vc["stabilizers"].as_array().unwrap().len(), 9);
}

#[test]
fn verify_passes_fresh_and_flags_tampered_dump() {
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("vc.json");
    let built = fenc(&["build", "--enc", "vc", "--rows", "2", "--cols", "2", "--out", dump.to_str().unwrap()]);
    assert!(built.status.success());

    let ok = fenc(&["verify", "--dump", dump.to_str().unwrap()]);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stdout));

    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(&dump).unwrap()).unwrap();
    let stab = &mut doc["stabilizers"][1]["pauli"];
    let flipped = stab.as_str().unwrap().replacen('Y', "X", 1);
    *stab = Value::String(flipped);
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, serde_json::to_string(&doc).unwrap()).unwrap();

    let out = fenc(&["verify", "--dump", bad.to_str().unwrap(), "--format", "json"]);
    assert_eq!(out.status.code(), Some(2));
    let results: Value = serde_json::from_slice(&out.stdout).unwrap();
    let failed: Vec<&str> = results
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["outcome"] == "fail")
        .map(|r| r["name"].as_str().unwrap())
        .collect();
    assert!(failed.contains(&"dump matches construction"), "{failed:?}");
    assert!(failed.len() >= 2, "{failed:?}");
    assert!(String::from_utf8_lossy(&out.stderr).contains("dump matches construction"));
}

fn reclassify_rows(enc: &Encoding, csv_text: &str) -> usize {
    let body = csv_text.split("\n# summary\n").next().unwrap();
    let mut rdr = csv::Reader::from_reader(body.as_bytes());
    let mut n = 0;
    for rec in rdr.records() {
        let rec = rec.unwrap();
        let p = PauliOp::parse(&rec[0], enc.n_qubits()).unwrap();
        let r = classify(enc, &p).unwrap();
        assert_eq!(rec[1], r.error.weight().to_string());
        assert_eq!(rec[2], r.syndrome.to_hex());
        assert_eq!(rec[3], r.category.to_string());
        assert_eq!(rec[4], r.fermionic_image.as_ref().map(|m| m.to_string()).unwrap_or_default());
        assert_eq!(rec[6], r.parity_switching.to_string());
        n += 1;
    }
    n
}

#[test]
fn csv_rows_reclassify_identically() {
    let out = fenc(&["classify", "--enc", "dk", "--rows", "3", "--cols", "3", "--weight", "2", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let enc = build_dk(&build_lattice(3, 3, Boundary::Open, 0).unwrap(), false).unwrap();
    let n = enc.n_qubits();
    let expected = 3 * n + 9 * n * (n - 1) / 2;
    assert_eq!(reclassify_rows(&enc, &text), expected);
    assert!(text.contains("# summary"));
}

#[test]
fn config_values_yield_to_command_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"command": "classify", "enc": "dk", "rows": 3, "cols": 3, "weight": 2}"#).unwrap();
    let c = cfg.to_str().unwrap();
    let two = json_stdout(&fenc(&["--config", c]));
    let one = json_stdout(&fenc(&["--config", c, "--weight", "1"]));
    let rows = |v: &Value| v["rows"].as_array().map(|a| a.len()).unwrap_or(0);
    assert_eq!(rows(&one), 3 * 11);
    assert!(rows(&two) > rows(&one));
    let explicit = json_stdout(&fenc(&["classify", "--config", c, "--weight", "1"]));
    assert_eq!(one, explicit);
}

#[test]
fn noise_fit_reports_channel_and_fit() {
    let out = fenc(&["noise-fit", "--modes", "1", "--cutoff", "3", "--beta", "inf", "--gammas", "0.005,0.01,0.02,0.05"]);
    let doc = json_stdout(&out);
    assert_eq!(doc["beta"], "inf");
    assert_eq!(doc["cptp"], true);
    let slope = doc["slope"].as_f64().unwrap();
    assert!((slope - 4.0).abs() < 0.1, "{slope}");
    let (fit, corr) = (doc["gamma_fit"].as_f64().unwrap(), doc["gamma_correlator"].as_f64().unwrap());
    assert!((fit - corr).abs() < 1e-3 * corr.abs().max(1.0), "{fit} vs {corr}");
    assert_eq!(doc["residuals"].as_array().unwrap().len(), 4);
}

#[test]
fn missing_config_file_is_usage_error() {
    let out = fenc(&["--config", Path::new("/nonexistent/cfg.json").to_str().unwrap(), "build"]);
    assert_eq!(out.status.code(), Some(1));
}
