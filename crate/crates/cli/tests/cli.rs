use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn critlen(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_critlen")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn k4(dir: &Path) -> String {
    let path = dir.join("k4.json");
    std::fs::write(&path, r#"{"n":4,"edges":[[0,1],[0,2],[0,3],[1,2],[1,3],[2,3]]}"#).unwrap();
    path.display().to_string()
}

#[test]
fn treelen_sweep_passes() {
    let out = critlen(&["verify", "treelen", "--max-n", "14"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["pass"], true);
}

#[test]
fn injected_fault_exits_one() {
    let out = critlen(&["verify", "treelen", "--max-n", "14", "--fault", "drop-length"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["pass"], false);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(critlen(&["bogus"]).status.code(), Some(2));
    assert_eq!(critlen(&["cycles", "oracle", "--in", "/nonexistent.json"]).status.code(), Some(2));
    assert_eq!(critlen(&["verify", "treelen", "--max-n", "9999"]).status.code(), Some(2));
}

#[test]
fn oracle_on_k4() {
    let dir = tempfile::tempdir().unwrap();
    let out = critlen(&["cycles", "oracle", "--in", &k4(dir.path())]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out), serde_json::json!({ "lengths": [3, 4] }));
}

#[test]
fn k4_is_critical_and_ordered() {
    let dir = tempfile::tempdir().unwrap();
    let input = k4(dir.path());
    let out = critlen(&["critical", "check", "--in", &input, "--k", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let out = critlen(&["critical", "order", "--in", &input, "--k", "3"]);
    let rows = json(&out)["data"]["ordering"].as_array().unwrap().clone();
    assert_eq!(rows[0]["position"], 1);
    assert_eq!(rows.iter().map(|r| r["d_plus"].as_u64().unwrap()).collect::<Vec<_>>(), [3, 2, 1, 0]);
}

#[test]
fn constructed_tree_has_degrees_one_and_three() {
    let dir = tempfile::tempdir().unwrap();
    let tree = dir.path().join("t.json");
    let dot = dir.path().join("t.dot");
    let out = critlen(&[
        "construct", "tree", "--seq", "staircase:2", "--n", "50",
        "--out", tree.to_str().unwrap(), "--dot", dot.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let g: Value = serde_json::from_slice(&std::fs::read(&tree).unwrap()).unwrap();
    assert_eq!(g["n"], 50);
    let mut deg = vec![0; 50];
    for e in g["edges"].as_array().unwrap() {
        deg[e[0].as_u64().unwrap() as usize] += 1;
        deg[e[1].as_u64().unwrap() as usize] += 1;
    }
    assert!(deg.iter().all(|&d| d == 1 || d == 3));
    assert!(std::fs::read_to_string(&dot).unwrap().contains("--"));

    // the apex graph of that tree yields certified cycles
    let apex = dir.path().join("a.json");
    let certs = dir.path().join("c.json");
    let out = critlen(&["critical", "from-tree", "--in", tree.to_str().unwrap(), "--out", apex.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let out = critlen(&["cycles", "find", "--in", apex.to_str().unwrap(), "--certs", certs.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    let lengths = report["data"]["lengths"].as_array().unwrap();
    assert!(lengths.len() as u64 >= report["data"]["bound"].as_u64().unwrap());
    let c: Value = serde_json::from_slice(&std::fs::read(&certs).unwrap()).unwrap();
    assert_eq!(c["lengths"].as_array().unwrap().len(), lengths.len());
}

#[test]
fn reports_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let out = critlen(&["verify", "constructions", "--seed", "7", "--json", p.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
        assert!(out.stdout.is_empty());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn analyze_reports_bound() {
    let dir = tempfile::tempdir().unwrap();
    let tree = dir.path().join("t.json");
    critlen(&["construct", "tree", "--seq", "constant:2", "--n", "64", "--out", tree.to_str().unwrap()]);
    let out = critlen(&["analyze", "lengths", "--in", tree.to_str().unwrap(), "--per-leaf"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["delta"], 3);
    assert!(r["lengths"].as_array().unwrap().len() as f64 >= r["bound"].as_f64().unwrap());
    assert_eq!(r["per_leaf"].as_array().unwrap().len() as u64, r["leaves"].as_u64().unwrap());
}

#[test]
fn sumset_pair_is_checked() {
    let out = critlen(&["sumset", "build", "--k", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["data"]["pair"]["sum_size"], 10);
    let out = critlen(&["sumset", "search", "--base", "13", "--max-size", "4", "--window", "-6:6"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(!json(&out)["data"]["hits"].as_array().unwrap().is_empty());
}
