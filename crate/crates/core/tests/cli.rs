use std::path::Path;
use std::process::{Command, Output};

fn homdeg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_homdeg")).args(args).env_remove("HOMDEG_TOL").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    let o = homdeg(args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

/// The report minus wall-clock fields.
fn stable(mut v: serde_json::Value) -> serde_json::Value {
    v.as_object_mut().unwrap().remove("wall_times");
    v
}

#[test]
fn dodecahedron_report() {
    let v = json(&["analyze", "--catalog", "dodecahedron", "--json"]);
    assert_eq!(v["instance"], "dodecahedron");
    assert_eq!(v["k"], 20);
    assert_eq!(v["n"], 3);
    assert_eq!(v["group_order"], "120");
    assert_eq!(v["shells"], serde_json::json!([3, 6, 6, 3, 1]));
    assert_eq!(v["degree"], 2);
    assert_eq!(v["termination"], "failed_at_m");
    assert_eq!(v["verdicts"][2]["holds"], false);
    assert!(v["verdicts"][2]["witness"]["first"].is_array());
    assert!(v["wall_times"]["levels"].is_array());
}

#[test]
fn goss6_report() {
    let v = json(&["analyze", "--catalog", "goss6", "--json"]);
    assert_eq!(v["shells"], serde_json::json!([16, 10]));
    assert_eq!(v["radius_sq"], "2/3");
    assert_eq!(v["verdicts"][1]["holds"], true);
    assert_eq!(v["shell_values"][0]["squared_distance"], "1");
    assert_eq!(v["shell_values"][1]["squared_distance"], "2");
}

#[test]
fn text_and_json_agree() {
    let v = json(&["analyze", "--catalog", "truncated_simplex:n=4", "--json"]);
    let text = stdout(&homdeg(&["analyze", "--catalog", "truncated_simplex:n=4"]));
    assert!(text.contains(&format!("group order: {}", v["group_order"].as_str().unwrap())));
    assert!(text.contains(&format!("degree: {} (failed_at_m)", v["degree"])));
    assert!(text.contains(&format!("points: {}", v["k"])));
}

#[test]
fn output_is_deterministic_across_threads() {
    let a = stable(json(&["analyze", "--catalog", "goss6", "--json", "--threads", "1"]));
    let b = stable(json(&["analyze", "--catalog", "goss6", "--json", "--threads", "4"]));
    assert_eq!(a, b);
}

#[test]
fn points_file_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rhombus.json");
    let o = homdeg(&["catalog", "export", "rhombus"]);
    assert!(o.status.success());
    std::fs::write(&path, &o.stdout).unwrap();
    let v = json(&["analyze", "--points-file", path.to_str().unwrap(), "--json"]);
    assert_eq!(v["degree"], 0);
    assert_eq!(v["verdicts"][0]["holds"], false);
}

#[test]
fn nameless_points_file_uses_the_file_stem() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "seg.json", r#"{"radicand": 5, "column_weights": ["1"], "points": [["3/2-1/2*sqrt(5)"], ["1/2*sqrt(5)"]]}"#);
    let v = json(&["analyze", "--points-file", &p, "--json"]);
    assert_eq!(v["instance"], "seg");
    assert_eq!(v["shell_values"][0]["squared_distance"], "29/4-3*sqrt(5)");
}

#[test]
fn matrix_files() {
    let dir = tempfile::tempdir().unwrap();
    let square = dir.path().join("square.json");
    std::fs::write(&square, r#"{"squared_distances": [["0","1","2","1"],["1","0","1","2"],["2","1","0","1"],["1","2","1","0"]]}"#)
        .unwrap();
    let v = json(&["analyze", "--matrix-file", square.to_str().unwrap(), "--json"]);
    assert_eq!(v["group_order"], "8");
    assert_eq!(v["n"], 2);
    assert_eq!(v["degree"], "infinite");

    let csv = dir.path().join("square.csv");
    std::fs::write(&csv, "0,1,2,1\n1,0,1,2\n2,1,0,1\n1,2,1,0\n").unwrap();
    let v = json(&["analyze", "--matrix-file", csv.to_str().unwrap(), "--json"]);
    assert_eq!(v["group_order"], "8");
    assert!(v["certificate"].is_number() || v["certificate"].is_null());
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(homdeg(&["analyze", "--catalog", "hypercube"]).status.code(), Some(2));
    assert_eq!(homdeg(&["analyze", "--catalog", "600cell"]).status.code(), Some(2));
    assert_eq!(homdeg(&["analyze", "--points-file", "/nonexistent.json"]).status.code(), Some(2));
    let bad = write(dir.path(), "bad.json", r#"{"squared_distances": [["0","1"],["2","0"]]}"#);
    let o = homdeg(&["analyze", "--matrix-file", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("symmetric"));

    // three entries within 8e-10 of each other and a fourth 9e-9 above
    let amb = write(
        dir.path(),
        "amb.csv",
        "0,1.0,1.0000000004,2\n1.0,0,1.0000000008,1.00000001\n1.0000000004,1.0000000008,0,2\n2,1.00000001,2,0\n",
    );
    assert_eq!(homdeg(&["analyze", "--matrix-file", &amb]).status.code(), Some(3));
}

#[test]
fn tolerance_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "near.csv", "0,1,1.000001\n1,0,1\n1.000001,1,0\n");
    let strict = Command::new(env!("CARGO_BIN_EXE_homdeg"))
        .args(["analyze", "--matrix-file", &m, "--json"])
        .env("HOMDEG_TOL", "1e-9")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&strict.stdout).unwrap();
    assert_eq!(v["group_order"], "2");
    let loose = Command::new(env!("CARGO_BIN_EXE_homdeg"))
        .args(["analyze", "--matrix-file", &m, "--json"])
        .env("HOMDEG_TOL", "1e-4")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&loose.stdout).unwrap();
    assert_eq!(v["group_order"], "6");
    // the variable alone does not switch exact inputs to float mode
    let exact = Command::new(env!("CARGO_BIN_EXE_homdeg"))
        .args(["analyze", "--catalog", "cube3", "--json"])
        .env("HOMDEG_TOL", "1e-4")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&exact.stdout).unwrap();
    assert!(v.get("certificate").is_none());
}

#[test]
fn float_mode_on_exact_points() {
    let v = json(&["analyze", "--catalog", "icosidodecahedron", "--float", "--json"]);
    assert_eq!(v["group_order"], "120");
    assert_eq!(v["degree"], 1);
}

#[test]
fn witness_command() {
    let v = json(&["witness", "--catalog", "dodecahedron", "--m", "3", "--json"]);
    assert_eq!(v["holds"], false);
    let w = &v["witness"];
    let first: Vec<String> = w["first"].as_array().unwrap().iter().map(|x| x.to_string()).collect();
    let second: Vec<String> = w["second"].as_array().unwrap().iter().map(|x| x.to_string()).collect();
    let check = json(&[
        "witness",
        "--catalog",
        "dodecahedron",
        "--first",
        &first.join(","),
        "--second",
        &second.join(","),
        "--json",
    ]);
    assert_eq!(check["profile_equal"], true);
    assert_eq!(check["orbit_inequivalent"], true);
    let same = json(&["witness", "--catalog", "cube3", "--first", "0,1", "--second", "1,0", "--json"]);
    assert_eq!(same["orbit_inequivalent"], false);
}

#[test]
fn group_command() {
    let v = json(&["group", "--catalog", "icosahedron", "--json"]);
    assert_eq!(v["order"], "120");
    assert_eq!(v["orbits"].as_array().unwrap().len(), 1);
    let product: u64 = v["transversal_sizes"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).product();
    assert_eq!(product, 120);
}

#[test]
fn catalog_listing() {
    let o = homdeg(&["catalog", "list"]);
    assert!(o.status.success());
    let text = stdout(&o);
    for name in ["simplex", "goss7", "octsev", "antiprism", "120cell"] {
        assert!(text.contains(name), "{name}");
    }
    let v = json(&["catalog", "list", "--json"]);
    assert!(v.as_array().unwrap().iter().any(|r| r["family"] == "600cell" && r["expensive"] == true));
}

#[test]
fn max_m_stops_early() {
    let v = json(&["analyze", "--catalog", "icosahedron", "--max-m", "2", "--no-accelerator", "--json"]);
    assert_eq!(v["degree"], ">=2");
    assert_eq!(v["termination"], "max_m");
}

#[test]
fn cross_check_runs_the_oracle() {
    let v = json(&["analyze", "--catalog", "cuboctahedron", "--cross-check", "--json"]);
    assert_eq!(v["oracle_agrees"], true);
}

#[test]
fn table_reports_each_row() {
    let o = homdeg(&["table"]);
    let text = stdout(&o);
    assert!(text.contains("dodecahedron: expected degree 2, computed 2"));
    assert!(text.contains("icosidodecahedron: expected degree 1, computed 1"));
    let failing: Vec<&str> = text.lines().filter(|l| l.ends_with("FAIL")).collect();
    let code = o.status.code();
    assert_eq!(code, Some(if failing.is_empty() { 0 } else { 1 }));
}
