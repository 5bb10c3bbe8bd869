use serde_json::Value;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kottwitz"))
        .args(args)
        .env_remove("KOTTWITZ_JOBS")
        .env_remove("KOTTWITZ_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

#[test]
fn compare_reports_a_match() {
    let v = json(&["compare", "--p", "5", "--m", "2", "--N", "3", "--format", "json"]);
    assert_eq!(v["match"], true);
    assert_eq!(v["lhs"], 44);
    assert_eq!(v["rhs"]["total"], "44/1");
    let order = json(&["compare", "--p", "7", "--m", "2", "--N", "4", "--convention", "order", "--format", "json"]);
    assert_eq!(order["rhs"]["convention"], "order");
    assert_eq!(order["match"], true);
}

#[test]
fn csv_rows_have_fixed_width() {
    let out = run(&["rhs", "--p", "7", "--N", "3", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("schema_version,p,m,N,kind"));
    assert!(lines.all(|l| l.split(',').count() == 14));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["compare", "--p", "5", "--N", "2"]).status.code(), Some(2));
    assert_eq!(run(&["compare", "--p", "6", "--N", "3"]).status.code(), Some(2));
    // the trace-formula side is only assembled for full level
    assert_eq!(run(&["rhs", "--p", "5", "--N", "3", "--kind", "gamma1"]).status.code(), Some(3));
}

#[test]
fn group_commands() {
    assert_eq!(json(&["kgroup", "--preset", "sl2", "--format", "json"])["order"], 2);
    assert_eq!(json(&["kgroup", "--preset", "gl2", "--format", "json"])["order"], 1);
    let e = json(&["endoscopy", "--group", "sl2", "--format", "json"]);
    let classes = e["elliptic_classes"].as_array().unwrap();
    assert_eq!(classes.len(), 2);
    assert!(classes.iter().any(|c| c["iota"] == "1/4"));
}

#[test]
fn fourier_over_a_fixture_file() {
    let path = std::env::temp_dir().join(format!("kottwitz-fixtures-{}.txt", std::process::id()));
    std::fs::write(&path, "ambient sl2\nparam a\nbeta inf 1\nbeta p 0\nend\nparam z\nbeta inf 0\nbeta p 0\nend\n").unwrap();
    let v = json(&["fourier", "--fixtures", path.to_str().unwrap(), "--lifts", "20", "--format", "json"]);
    std::fs::remove_file(&path).ok();
    assert_eq!(v["lift_independent"], true);
    let sums: Vec<&str> = v["rows"].as_array().unwrap().iter().map(|r| r["fourier_sum"].as_str().unwrap()).collect();
    assert_eq!(sums, ["0", "2"]);
}

#[test]
fn adlv_and_selftest() {
    let v = json(&["adlv", "--p", "3", "--n", "2", "--b", "0, 1; p, 0", "--format", "json"]);
    assert_eq!(v["points"], 2);
    assert_eq!(v["saturated"], true);
    let out = run(&["selftest", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}
