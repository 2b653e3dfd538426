use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn etaq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_etaq")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn schema_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../docs/schemas")
}

fn validate(schema: &str, doc: &Value) {
    let path = schema_dir().join(format!("{schema}.schema.json"));
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    let errors: Vec<String> = validator.iter_errors(doc).map(|e| format!("{e} at {}", e.instance_path)).collect();
    assert!(errors.is_empty(), "{}: {errors:?}\n{doc}", path.display());
}

fn json_of(args: &[&str]) -> Value {
    let o = etaq(args);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

#[test]
fn bounds_example() {
    let o = etaq(&["bounds", "--level", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), r#"{"F":"9","G_paper":"1","G_proof":"9/4"}"#);
    validate("bounds", &serde_json::from_str(&stdout(&o)).unwrap());
    let v = json_of(&["bounds", "--level", "2", "--weight2", "1"]);
    assert_eq!(v["kF"], "3");
    assert_eq!(v["count_bound"], "36");
    validate("bounds", &v);
}

#[test]
fn matrix_documents() {
    let v = json_of(&["matrix", "6", "--json"]);
    assert_eq!(v["divisors"], serde_json::json!([1, 2, 3, 6]));
    assert_eq!(v["rows"][0], serde_json::json!(["6", "3", "2", "1"]));
    validate("matrix", &v);
    let inv = json_of(&["matrix", "--level", "12", "--inverse", "--json"]);
    validate("matrix", &inv);
    let text = etaq(&["matrix", "4"]);
    assert!(stdout(&text).contains('4'));
}

#[test]
fn quotient_documents() {
    let v = json_of(&["orders", "--eta", "1:2,2:-1", "--ambient", "2", "--json"]);
    assert_eq!(v["orders24"], serde_json::json!({"1": 3, "2": 0}));
    assert_eq!(v["holomorphic"], true);
    validate("orders", &v);
    let v = json_of(&["al", "--eta", "1:2,2:-1", "--ambient", "2", "--n", "2"]);
    validate("al", &v);
    assert_eq!(v["image"], serde_json::json!({"1": -1, "2": 2}));
    let v = json_of(&["valence", "--eta", "1:1,3:1", "--ambient", "3"]);
    assert_eq!(v["ok"], true);
    validate("valence", &v);
    let v = json_of(&["series", "--eta", "1:2,2:-1", "--ambient", "2", "--terms", "10", "--json"]);
    assert_eq!(v["coeffs"], serde_json::json!([1, -2, 0, 0, 2, 0, 0, 0, 0, -2]));
    validate("series", &v);
    let v = json_of(&["factorize", "--eta", "1:1,2:1", "--ambient", "2"]);
    assert_eq!(v.as_array().unwrap().len(), 2);
    validate("factorize", &v);
}

#[test]
fn enumerate_lines_validate() {
    let o = etaq(&["enumerate", "--level", "2", "--weight2", "1", "--simple-only"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 3);
    assert!(text.contains(r#"{"N":2,"weight2":1,"exponents":{"1":2,"2":-1},"orders24":{"1":3,"2":0},"level":2,"primitive":true,"quasi_irreducible":true,"simple":true}"#));
    let o = etaq(&["enumerate", "--level", "6", "--weight2", "2", "--strategy", "both"]);
    for line in stdout(&o).lines() {
        validate("catalog_entry", &serde_json::from_str(line).unwrap());
    }
}

#[test]
fn enumerate_writes_file() {
    let dir = std::env::temp_dir().join(format!("etaq-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("cat.jsonl");
    let o = etaq(&["enumerate", "--level", "4", "--weight2", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    assert_eq!(written, stdout(&etaq(&["enumerate", "--level", "4", "--weight2", "2"])));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn check_suites() {
    for suite in ["lemma1", "chain", "lemma3", "lemma4", "aux", "all"] {
        let o = etaq(&["check", "--suite", suite, "--level", "12", "--samples", "50", "--seed", "4"]);
        assert_eq!(o.status.code(), Some(0), "{suite}");
        validate("check", &serde_json::from_str(&stdout(&o)).unwrap());
    }
    // published constants produce violations but exit 0
    let v = json_of(&["check", "--level", "2", "--samples", "200", "--seed", "1", "--g", "paper"]);
    assert!(!v["violations"].as_array().unwrap().is_empty());
    assert!(v["failures"].as_array().unwrap().is_empty());
    validate("check", &v);
    let v = json_of(&["check", "--suite", "aux", "--level", "8", "--samples", "0"]);
    assert_eq!(v["violations"][0]["name"], "aux_row_sum");
    assert_eq!(v["checks"]["aux_row_sum_corrected"]["failed"], 0);
}

#[test]
fn g_and_admissible() {
    let v = json_of(&["g", "--n", "0", "--cap", "100"]);
    assert_eq!(v["g"], "2");
    assert_eq!(v["status"], "value");
    validate("g", &v);
    let v = json_of(&["g", "--n", "1", "--cap", "500"]);
    assert_eq!(v["status"], "cap-limited");
    validate("g", &v);
    let v = json_of(&["admissible", "--weight2", "1", "--level", "13"]);
    assert_eq!(v["admissible"], false);
    validate("admissible", &v);
    let v = json_of(&["admissible", "--weight2", "1", "--level", "2"]);
    assert_eq!(v["admissible"], true);
    validate("admissible", &v);
}

#[test]
fn deterministic_output() {
    let runs = [
        vec!["check", "--level", "24", "--samples", "100", "--seed", "9"],
        vec!["enumerate", "--level", "12", "--weight2", "2"],
        vec!["series", "--eta", "1:-1,4:3", "--ambient", "4"],
    ];
    for args in runs {
        let a = etaq(&args);
        let b = etaq(&args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert!(!a.stdout.is_empty());
    }
    let a = etaq(&["check", "--level", "6", "--samples", "100", "--seed", "1"]);
    let b = etaq(&["check", "--level", "6", "--samples", "100", "--seed", "2"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(b.status.code(), Some(0));
}

#[test]
fn exit_codes() {
    let bad = etaq(&["orders", "--eta", "1:2,x:3", "--ambient", "2"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("x:3"));
    assert_eq!(etaq(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(etaq(&["bounds", "--level", "4", "--bogus"]).status.code(), Some(1));
    assert_eq!(etaq(&["orders", "--eta", "5:1", "--ambient", "4"]).status.code(), Some(1));
    assert_eq!(etaq(&["--help"]).status.code(), Some(0));
}

#[test]
fn in_process_dispatch() {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = etaq::cli::run(["etaq", "bounds", "--level", "1"].map(std::ffi::OsString::from), &mut out, &mut err);
    assert_eq!(code, 0);
    assert_eq!(String::from_utf8(out).unwrap().trim(), r#"{"F":"1","G_paper":"2","G_proof":"2"}"#);
}

#[test]
fn schemas_reject_malformed_documents() {
    let path = schema_dir().join("bounds.schema.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    assert!(!validator.is_valid(&serde_json::json!({"F": 9, "G_paper": "1", "G_proof": "9/4"})));
    assert!(!validator.is_valid(&serde_json::json!({"F": "9", "G_paper": "1"})));
    assert!(!validator.is_valid(&serde_json::json!({"F": "9", "G_paper": "1", "G_proof": "9/4", "extra": 1})));
    assert!(!validator.is_valid(&serde_json::json!({"F": "9", "G_paper": "1", "G_proof": "9/4", "weight2": 1})));
}
