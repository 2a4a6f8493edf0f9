use std::path::PathBuf;
use std::process::{Command, Output};

use quadalg::io::presentation_to_json;
use quadalg::presets::{Preset, Sl3Block};
use quadalg::Field;

fn quadalg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quadalg")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn temp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("quadalg-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn verify_all_sl3_passes_and_writes_report() {
    let report = temp("sl3.json");
    let o = quadalg(&["verify-all", "--preset", "sl3-block", "--report", report.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("0 failed: PASS"));
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(json["passed"], true);
    let first = &json["checks"][0];
    for key in ["check", "paper_ref", "expected", "computed", "status", "seconds"] {
        assert!(first.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn verify_all_over_prime_field_marks_decomposition_formal() {
    let o = quadalg(&["verify-all", "--field", "Fp:5", "--format", "json-like"]);
    assert_eq!(o.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let formal: Vec<&str> = json["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["status"] == "formal")
        .map(|c| c["check"].as_str().unwrap())
        .collect();
    assert_eq!(formal, ["tensor_square_decomposition"]);
}

#[test]
fn sl2_dimension_check_fails_with_exit_1() {
    let o = quadalg(&["verify-all", "--preset", "sl2-block"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("fail   total_dimension"));
}

#[test]
fn input_errors_exit_2() {
    assert_eq!(quadalg(&["build", "--preset", "nope"]).status.code(), Some(2));
    assert_eq!(quadalg(&["build", "--field", "R"]).status.code(), Some(2));
    let bad = temp("bad.json");
    std::fs::write(&bad, "{\n  \"field\": \"Q\",\n  \"vertices\": [\"a\",\n}").unwrap();
    let o = quadalg(&["build", "--input", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 4"));
}

#[test]
fn input_file_round_trip() {
    let path = temp("sl3-input.json");
    std::fs::write(&path, presentation_to_json(&Sl3Block.presentation(Field::Rationals).unwrap())).unwrap();
    let o = quadalg(&["hilbert", "--input", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("det = 1 - 6t^2 + 15t^4 - 20t^6 + 15t^8 - 6t^10 + t^12"));
    let o = quadalg(&["verify-all", "--input", path.to_str().unwrap(), "--imax", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("triple_agreement"));
}

#[test]
fn resolve_and_ext() {
    let o = quadalg(&["resolve", "--module", "M_lambda", "--imax", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("linear: true"));
    let o = quadalg(&["ext", "--module", "S:gamma", "--imax", "2", "--format", "json-like"]);
    let json: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(json[0]["diagonal"], true);
    let o = quadalg(&["resolve", "--module", "Q:gamma"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn centre_and_derivations() {
    let o = quadalg(&["centre"]);
    assert!(stdout(&o).contains("centre: dim 6"));
    let o = quadalg(&["derivations", "--format", "json-like"]);
    let json: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(json["hh1"], 9);
    let o = quadalg(&["decompose", "--preset", "sl2-block"]);
    assert_eq!(o.status.code(), Some(2));
}
