use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

fn abelmap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_abelmap")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

#[test]
fn resolve_with_phi_s_plan() {
    let o = abelmap(&["resolve", &data("G3.json"), "--plan", &data("phiS.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "resolved");
}

#[test]
fn resolve_with_empty_plan_names_the_pair() {
    let o = abelmap(&["resolve", &data("G3.json")]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o).trim(), "not resolved: pair (e12,e13)");
    let o = abelmap(&["resolve", &data("G3.json"), "--json"]);
    assert_eq!(json(&o)["resolved"], Value::Bool(false));
}

#[test]
fn twister_oracle_agrees_on_banana() {
    let o = abelmap(&["twister", &data("G2.json"), "--oracle"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("α(2,2) = (0,1)"), "{text}");
    assert!(text.trim_end().ends_with("agree"));
    let v = json(&abelmap(&["twister", &data("G2.json"), "--oracle", "--json"]));
    assert_eq!(v["twister"]["2"]["2"], serde_json::json!({"1": 0, "2": 1}));
    assert_eq!(v["oracle"]["agree"], Value::Bool(true));
}

#[test]
fn multidegree_inputs() {
    let g = data("G2.json");
    for d in ["2,-2", "[2,-2]", r#"{"1":2,"2":-2}"#] {
        let v = json(&abelmap(&["qs-reduce", &g, d, "--json"]));
        assert_eq!(v["result"], serde_json::json!({"1": 0, "2": 0}));
        assert_eq!(v["twist"], serde_json::json!({"1": 0, "2": 1}));
    }
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("d.json");
    std::fs::write(&f, r#"{"1": 0, "2": 0}"#).unwrap();
    let o = abelmap(&["qs-check", &g, f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "quasistable");
    let o = abelmap(&["qs-check", &g, "2,-2"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn malformed_input_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"components": ["1","2"], "marked": "1", "nodes": []}"#).unwrap();
    assert_eq!(abelmap(&["validate", bad.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(abelmap(&["validate", "does-not-exist.json"]).status.code(), Some(2));
    assert_eq!(abelmap(&["qs-check", &data("G2.json"), "1,2"]).status.code(), Some(2));
    assert_eq!(abelmap(&["verify", "--suite", "nonsense"]).status.code(), Some(2));
    assert_eq!(abelmap(&["verify", "--max-components", "0"]).status.code(), Some(2));
    assert_eq!(abelmap(&["sync", &data("G2.json"), "--pair", "a,b", "--match", "2:2", "--point", "3"]).status.code(), Some(2));
}

#[test]
fn nested_and_tails() {
    let o = abelmap(&["nested", &data("G3.json"), "--s", "2", "--anchors", "2,3"]);
    assert_eq!(stdout(&o).trim(), "{2,3}");
    let v = json(&abelmap(&["nested", &data("G3.json"), "--s", "3", "--anchors", "2", "--json"]));
    assert_eq!(v, serde_json::json!([]));
    let v = json(&abelmap(&["tails", &data("G4.json"), "--k", "1", "--json"]));
    assert_eq!(v.as_array().unwrap().len(), 2);
}

#[test]
fn banana_points_and_sync() {
    let g = data("G2.json");
    let v = json(&abelmap(&["distinguished", &g, "--pair", "a,b", "--match", "2:2", "--json"]));
    let pts = v["points"].as_array().unwrap();
    assert!(pts.iter().all(|p| p["quasistable"] == Value::Bool(true)));
    for point in ["1", "2"] {
        let o = abelmap(&["sync", &g, "--pair", "a,b", "--match", "2:2", "--point", point]);
        assert_eq!(o.status.code(), Some(0));
        let o = abelmap(&["sync", &g, "--pair", "a,b", "--match", "2:1", "--point", point]);
        assert_eq!(o.status.code(), Some(1));
    }
    let o = abelmap(&["distinguished", &g, "--pair", "a,b", "--match", "2:2,1:2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn plans_and_minimality() {
    let v = json(&abelmap(&["plan", &data("G3.json"), "--from-tails", "--json"]));
    assert_eq!(v.as_array().unwrap().len(), 6);
    let v = json(&abelmap(&["minimal", &data("G3.json"), "--json"]));
    assert_eq!(v["from_tails_is_minimal"], Value::Bool(false));
    assert_eq!(v["minimal_plan"], serde_json::json!([{"pair": ["e12", "e13"], "match": [["1", "1"], ["2", "3"]]}]));
}

#[test]
fn dot_export() {
    let o = abelmap(&["export-dot", &data("G2.json")]);
    let text = stdout(&o);
    assert!(text.starts_with("graph G {"));
    assert!(text.contains("doublecircle"));
    let o = abelmap(&["export-dot", &data("G1.json"), "--lifted"]);
    assert!(stdout(&o).contains("E(l,1)"));
}

#[test]
fn verify_is_deterministic_apart_from_timing() {
    let run = |jobs: &str| {
        let mut v = json(&abelmap(&["verify", "--seed", "9", "--instances", "30", "--jobs", jobs, "--json"]));
        v.as_object_mut().unwrap().remove("elapsed_ms");
        v
    };
    let a = run("1");
    assert_eq!(a["passed"], Value::Bool(true));
    assert_eq!(a, run("1"));
    assert_eq!(a, run("3"));
}

#[test]
fn verify_empty_run_passes() {
    let o = abelmap(&["verify", "--instances", "0"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn displayed_profile_counterexample_replays() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let o = abelmap(&[
        "verify",
        "--graph",
        &data("G2.json"),
        "--profile",
        "as-displayed",
        "--suite",
        "thm-64-resolution",
        "--report",
        report.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let saved: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let dump = &saved["counterexamples"][0];
    assert_eq!(dump["suite"], "resolution");
    let single = dir.path().join("dump.json");
    std::fs::write(&single, dump.to_string()).unwrap();
    let v = json(&abelmap(&["verify", "--replay", single.to_str().unwrap(), "--json"]));
    assert_eq!(v[0]["reproduced"], Value::Bool(true));
    let o = abelmap(&["verify", "--replay", report.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("reproduced"));
}

#[test]
fn discrepancy_mode_on_banana() {
    let o = abelmap(&["verify", "--graph", &data("G2.json"), "--discrepancy", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["demonstrated"], Value::Bool(true));
    assert_eq!(v["reconstructed"]["passed"], Value::Bool(true));
    assert_eq!(v["as-displayed"]["passed"], Value::Bool(false));
}
