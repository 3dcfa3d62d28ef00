use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn tn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tn")).args(args).output().expect("binary runs")
}

fn report(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = tn(&all);
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), v)
}

const TWO_VERTEX_GRAPH: &str = r#"{
  "rank": 3,
  "vertices": ["a", "b"],
  "edges": [
    {"src": "a", "dst": "a", "label": [1, 0, 0]},
    {"src": "b", "dst": "b", "label": [0, 1, 0]},
    {"src": "a", "dst": "b", "label": [0, 0, 1]},
    {"src": "b", "dst": "a", "label": [0, 0, 1]}
  ]
}"#;

#[test]
fn delta_identity_passes() {
    let (code, v) = report(&["torelli", "verify-appendix", "--n", "3"]);
    assert_eq!(code, 0);
    assert!(v["failures"].as_array().unwrap().is_empty());
}

#[test]
fn conjugation_passes() {
    let (code, v) = report(&["torelli", "verify-conjugation", "--n", "4", "--hmax", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["checks"].as_array().unwrap().len(), 6 + 24);
}

#[test]
fn connected_sweep() {
    let (code, v) = report(&["dlk", "--rank", "3", "--bound", "2", "--check", "connected"]);
    assert_eq!(code, 0);
    assert_eq!(v["data"].as_array().unwrap().len(), 2821);
}

#[test]
fn rank_two_enumeration() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("roses.json");
    let (code, v) = report(&["roses", "enumerate", "--rank", "2", "--bound", "1", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["data"]["count"], 5);
    let written: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(written.as_array().unwrap().len(), 5);
}

#[test]
fn identity_has_no_witness() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.json");
    fs::write(&m, "[[1,0,0],[0,1,0],[0,0,1]]").unwrap();
    let (code, v) = report(&["dlk", "--matrix", m.to_str().unwrap(), "--check", "nonempty"]);
    assert_eq!(code, 0);
    assert!(v["data"][0]["witness"].is_null());
}

#[test]
fn single_rose_report() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.json");
    fs::write(&m, "[[2,1,0],[1,1,0],[0,0,1]]").unwrap();
    let (code, v) = report(&["dlk", "--matrix", m.to_str().unwrap(), "--check", "homology"]);
    assert_eq!(code, 0);
    let row = &v["data"][0];
    assert!(row["descending_edges"].as_u64().unwrap() > 0);
    assert_eq!(row["homology"][0]["dim"], 0);
    let (code, v) = report(&["cdlk", "--matrix", m.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(v["data"]["f_vector"].as_array().unwrap().len() <= 3);
}

#[test]
fn rank_two_tree_with_dot() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("t.dot");
    let (code, _) = report(&["rank2-tree", "--bound", "3", "--dot", dot.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(fs::read_to_string(&dot).unwrap().starts_with("graph rank2"));
}

#[test]
fn toy_certificate() {
    let (code, v) = report(&["toy", "certify", "--rank", "3", "--window", "1"]);
    assert_eq!(code, 0);
    let tori = v["data"]["tori"].as_array().unwrap();
    assert_eq!(tori.len(), 9);
    assert!(tori.iter().all(|t| t["sphere_ok"] == true));
}

#[test]
fn export_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.json");
    fs::write(&g, TWO_VERTEX_GRAPH).unwrap();
    let a = dir.path().join("a.dot");
    let b = dir.path().join("b.dot");
    assert_eq!(tn(&["export", "--input", g.to_str().unwrap(), "--out", a.to_str().unwrap()]).status.code(), Some(0));
    assert_eq!(tn(&["export", "--input", g.to_str().unwrap(), "--out", b.to_str().unwrap()]).status.code(), Some(0));
    let dot = fs::read_to_string(&a).unwrap();
    assert_eq!(dot, fs::read_to_string(&b).unwrap());
    for l in ["(1,0,0)", "(0,1,0)", "(0,0,1)"] {
        assert!(dot.contains(l), "{dot}");
    }
    assert_eq!(dot.matches("->").count(), 4);
}

#[test]
fn export_rose_has_loops() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.json");
    fs::write(
        &g,
        r#"{"rank":2,"vertices":[0],"edges":[{"src":0,"dst":0,"label":[1,0]},{"src":0,"dst":0,"label":[0,1]}]}"#,
    )
    .unwrap();
    let (code, v) = report(&["export", "--input", g.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["data"]["dot"].as_str().unwrap().matches("v0 -> v0").count(), 2);
}

#[test]
fn invalid_graph_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.json");
    fs::write(
        &g,
        r#"{"rank":2,"vertices":[0],"edges":[{"src":0,"dst":0,"label":[2,0]},{"src":0,"dst":0,"label":[0,1]}]}"#,
    )
    .unwrap();
    let out = tn(&["export", "--input", g.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bad_inputs_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.json");
    fs::write(&g, "{not json").unwrap();
    assert_eq!(tn(&["export", "--input", g.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(tn(&["torelli", "verify-appendix", "--bogus"]).status.code(), Some(2));
    assert_eq!(tn(&["nonsense"]).status.code(), Some(2));
    let m = dir.path().join("m.json");
    fs::write(&m, "[[2,0],[0,1]]").unwrap();
    assert_eq!(tn(&["cdlk", "--matrix", m.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(tn(&["torelli", "verify-appendix", "--n", "2"]).status.code(), Some(2));
}

#[test]
fn reports_ignore_thread_count() {
    let run = |threads: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_tn"))
            .env("TORELLI_THREADS", threads)
            .args(["--json", "dlk", "--rank", "3", "--bound", "1", "--check", "connected"])
            .output()
            .unwrap();
        let mut v: Value = serde_json::from_slice(&out.stdout).unwrap();
        v["wall_ms"] = Value::Null;
        v
    };
    assert_eq!(run("1"), run("3"));
    let out = Command::new(env!("CARGO_BIN_EXE_tn"))
        .env("TORELLI_THREADS", "zero")
        .args(["roses", "enumerate", "--rank", "2", "--bound", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
