use std::collections::BTreeMap;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_analogq"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn analogq")
}

fn ok(args: &[&str]) {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

fn schema(name: &str) -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(format!("{name}.schema.json"));
    let value: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&value).unwrap()
}

fn check(file: &Path, schema_name: &str) {
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(file).unwrap()).unwrap();
    let v = schema(schema_name);
    let errors: Vec<String> = v.iter_errors(&doc).map(|e| format!("{} at {}", e, e.instance_path)).collect();
    assert!(errors.is_empty(), "{}: {errors:#?}", file.display());
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn outputs_match_their_schemas() {
    let dir = tempfile::tempdir().unwrap();
    let d = |sub: &str| dir.path().join(sub);
    ok(&["qst", "--shots", "200", "--noise", "calibrated", "--out", s(&d("qst"))]);
    ok(&["qpt", "--shots", "200", "--out", s(&d("qpt"))]);
    ok(&["iterate", "--iterations", "3", "--shots", "200", "--noise", "calibrated", "--out", s(&d("it"))]);
    ok(&["deutsch", "--trials", "40", "--out", s(&d("d"))]);
    let series = d("it").join("series.csv");
    ok(&["fit", s(&series), "--out", s(&d("fit"))]);

    check(&d("qst").join("pauli_means.json"), "pauli_means");
    check(&d("qst").join("rho_hat.json"), "rho_hat");
    check(&d("qpt").join("counts.json"), "counts");
    check(&d("qpt").join("chi_hat.json"), "chi_hat");
    check(&d("it").join("series.json"), "series");
    check(&d("it").join("forecast.json"), "forecast");
    check(&d("d").join("deutsch.json"), "deutsch");
    check(&d("fit").join("fit.json"), "fit");
}

#[test]
fn schemas_reject_extra_fields() {
    let dir = tempfile::tempdir().unwrap();
    ok(&["deutsch", "--trials", "10", "--out", s(dir.path())]);
    let mut doc: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("deutsch.json")).unwrap()).unwrap();
    doc["aggregate"]["extra"] = Value::from(1);
    assert!(!schema("deutsch").is_valid(&doc));
}

#[test]
fn tables_can_be_reanalysed() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("a");
    let second = dir.path().join("b");
    ok(&["qpt", "--shots", "500", "--out", s(&first)]);
    let counts = first.join("counts.json");
    ok(&["qpt", "--counts", s(&counts), "--out", s(&second)]);
    let chi = |p: &Path| -> Value {
        let v: Value = serde_json::from_str(&std::fs::read_to_string(p.join("chi_hat.json")).unwrap()).unwrap();
        v["chi_hat"].clone()
    };
    assert_eq!(chi(&first), chi(&second));

    ok(&["qst", "--shots", "300", "--out", s(&first)]);
    let table = first.join("pauli_means.json");
    ok(&["qst", "--table", s(&table), "--out", s(&second)]);
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["qst", "--shots", "100", "--noise", "calibrated", "--seed", "4"],
        vec!["qpt", "--shots", "100", "--noise", "calibrated", "--seed", "4"],
        vec!["iterate", "--iterations", "3", "--shots", "100", "--noise", "calibrated"],
        vec!["deutsch", "--trials", "30", "--noise", "calibrated"],
    ];
    for (i, args) in cases.iter().enumerate() {
        let out = dir.path().join(i.to_string());
        let mut full = args.clone();
        full.extend(["--out", s(&out)]);
        ok(&full);
        let first = snapshot(&out);
        ok(&full);
        assert!(!first.is_empty());
        assert_eq!(first, snapshot(&out), "{args:?}");
    }
}

fn snapshot(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap())
        })
        .collect()
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = s(dir.path());

    let missing = run(&["qst", "--config", "/definitely/not/here.json", "--out", out]);
    assert_eq!(missing.status.code(), Some(1));

    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, r#"{"shots": 10, "colour": "red"}"#).unwrap();
    let bad = run(&["qst", "--config", s(&cfg), "--out", out]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("colour"));

    assert_eq!(run(&["qst", "--noise", "loud", "--out", out]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));

    let counts = dir.path().join("zero.json");
    std::fs::write(
        &counts,
        r#"{"kind": "qpt-counts", "shots": 10, "inputs": ["0", "1", "+", "+i"], "settings": ["0", "1", "+", "+i"],
            "counts": [[0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]}"#,
    )
    .unwrap();
    let numerical = run(&["qpt", "--counts", s(&counts), "--out", out]);
    assert_eq!(numerical.status.code(), Some(3), "{}", String::from_utf8_lossy(&numerical.stderr));
}

#[test]
fn fit_reports_the_offending_line() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("series.csv");
    std::fs::write(&csv, "n,fidelity,kind\n1,0.99,process-fidelity\n2,0.98,process-fidelity\n2,0.97,process-fidelity\n")
        .unwrap();
    let out = run(&["fit", s(&csv), "--out", s(dir.path())]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 4"), "{err}");

    let json = dir.path().join("series.json");
    std::fs::write(&json, "{\"records\": [\n  {\"n\": 1, \"fidelity\": 0.9, \"kind\": \"process-fidelity\"},\n  oops\n]}\n")
        .unwrap();
    let out = run(&["fit", s(&json), "--out", s(dir.path())]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));

    std::fs::write(&csv, "n,fidelity,kind\n1,0.99,process-fidelity\n2,0.97,process-fidelity\n3,0.96,process-fidelity\n")
        .unwrap();
    ok(&["fit", s(&csv), "--predictor", "gate-form", "--out", s(dir.path())]);
    check(&dir.path().join("fit.json"), "fit");
}
