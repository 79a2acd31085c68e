use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn ext(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ext"))
        .args(args)
        .output()
        .expect("the binary runs")
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
        .display()
        .to_string()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

#[test]
fn cyclic_two_all_products_verified() {
    let out = ext(&["group", "--named", "cyclic:2", "--field", "2", "--max-degree", "6", "--products", "all", "--verify"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(&out);
    assert_eq!(report["schema"], 1);
    assert_eq!(report["dims"], serde_json::json!([1, 1, 1, 1, 1, 1, 1]));
    let kinds: Vec<&str> = report["products"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t["kind"].as_str().unwrap())
        .collect();
    assert_eq!(kinds, ["yoneda", "cup", "star"]);
    assert!(report["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
}

#[test]
fn hochschild_dual_numbers_from_file() {
    let out = ext(&["hochschild", "--algebra", &data("dualnumbers.json"), "--field", "3", "--max-degree", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["dims"], serde_json::json!([2, 1, 1, 1, 1]));
}

#[test]
fn field_flag_overrides_the_file() {
    let out = ext(&["group", "--input", &data("z2.json"), "--field", "3", "--max-degree", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["field"], "F3");
    assert_eq!(report["dims"], serde_json::json!([1, 0, 0, 0]));
}

#[test]
fn axioms_pass() {
    let out = ext(&["axioms", "--samples", "10", "--field", "5", "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("PASS anticommuting-square [F5]"));
    assert!(text.contains("PASS sign-relation [F5]"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn malformed_input_exits_two() {
    let out = ext(&["group", "--input", &data("broken_group.json")]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("associativity fails at (1, 1, 2)"), "{err}");

    let out = ext(&["group", "--input", &data("does-not-exist.json")]);
    assert_eq!(out.status.code(), Some(2));

    let out = ext(&["group", "--named", "klein4"]);
    assert_eq!(out.status.code(), Some(2), "missing field");
}

#[test]
fn reports_are_deterministic() {
    let args = ["group", "--input", &data("klein4.json"), "--field", "2", "--max-degree", "3", "--products", "cup", "--verify"];
    let a = ext(&args);
    let b = ext(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn csv_and_out_path() {
    let dir = std::env::temp_dir().join(format!("ext-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.csv");
    let out = ext(&[
        "hochschild", "--algebra", &data("upper_triangular_q.json"), "--max-degree", "3", "--format", "csv",
        "--verify", "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let csv = std::fs::read_to_string(&path).unwrap();
    assert!(csv.starts_with("record,name,p,i,q,j,value,witness\n"));
    assert!(csv.contains("dim,,0,,,,1,"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn star_guard_exits_two() {
    let out = ext(&["group", "--named", "s3", "--field", "3", "--max-degree", "4", "--products", "star"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("lower --max-degree"));
}
