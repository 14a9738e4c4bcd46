use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn dtlocal(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dtlocal"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON document")
}

#[test]
fn gen_then_solve_threshold_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = dtlocal(&["gen", "--family", "u1", "--n", "2", "-o", "t.json"], dir.path());
    assert!(out.status.success());
    assert_eq!(stdout_json(&out)["rows"], 3);
    let out = dtlocal(&["solve", "--table", "t.json", "--mode", "det-nodes"], dir.path());
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["objective"], 6);
    assert_eq!(v["optimality"], "exact");
}

#[test]
fn reduction_tree_dot_has_eight_nodes() {
    let dir = tempfile::tempdir().unwrap();
    dtlocal(&["gen", "--family", "u1", "--n", "2", "-o", "t.json"], dir.path());
    let out = dtlocal(
        &[
            "solve",
            "--table",
            "t.json",
            "--mode",
            "reduction-tree",
            "--dot",
            "g.dot",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let dot = std::fs::read_to_string(dir.path().join("g.dot")).unwrap();
    let node_lines = dot.lines().filter(|l| l.contains(" [") && !l.contains("->")).count();
    assert_eq!(node_lines, 8);
}

#[test]
fn corrupted_tree_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    dtlocal(&["gen", "--family", "u1", "--n", "2", "-o", "t.json"], dir.path());
    dtlocal(
        &["solve", "--table", "t.json", "--mode", "det-nodes", "-o", "tree.json"],
        dir.path(),
    );
    let ok = dtlocal(
        &["verify", "--table", "t.json", "--tree", "tree.json", "--mode", "det"],
        dir.path(),
    );
    assert!(ok.status.success());
    assert_eq!(stdout_json(&ok)["ok"], true);

    let text = std::fs::read_to_string(dir.path().join("tree.json")).unwrap();
    let mut tree: Value = serde_json::from_str(&text).unwrap();
    let term = tree["nodes"]
        .as_array_mut()
        .unwrap()
        .iter_mut()
        .find(|n| n["kind"] == "term")
        .unwrap();
    let d = term["decision"].as_u64().unwrap();
    term["decision"] = Value::from(if d == 1 { 2 } else { 1 });
    std::fs::write(dir.path().join("bad.json"), tree.to_string()).unwrap();

    let out = dtlocal(
        &["verify", "--table", "t.json", "--tree", "bad.json", "--mode", "det"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    assert_eq!(v["ok"], false);
    assert!(v["violations"].as_array().unwrap().iter().any(|x| x["row"].is_u64()));
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dtlocal(&["solve", "--table", "missing.json", "--mode", "det-depth"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing.json"));
    assert!(out.stdout.is_empty());

    dtlocal(&["gen", "--family", "u1", "--n", "2", "-o", "t.json"], dir.path());
    let out = dtlocal(
        &["solve", "--table", "t.json", "--mode", "det-nodes-budget"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    let out = dtlocal(&["gen", "--family", "u1", "--n", "3", "--bound", "2"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let out = dtlocal(&["frobnicate"], dir.path());
    assert_eq!(out.status.code(), Some(2));

    let out = Command::new(env!("CARGO_BIN_EXE_dtlocal"))
        .args(["gen", "--family", "u2", "--n", "2"])
        .env("DT_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oversized_oracle_requests_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    dtlocal(&["gen", "--family", "u3", "--n", "4", "-o", "t.json"], dir.path());
    let out = dtlocal(&["oracle", "--table", "t.json"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    let out = dtlocal(
        &[
            "oracle",
            "--table",
            "t.json",
            "--max-columns",
            "4",
            "--max-rows",
            "16",
            "--max-depth",
            "1",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    assert!(stdout_json(&out)["det"]["depth"].is_null());
}

#[test]
fn gen_without_output_prints_the_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = dtlocal(
        &["gen", "--family", "u3", "--n", "2", "--labeling", "constant"],
        dir.path(),
    );
    let v = stdout_json(&out);
    assert_eq!(v["format"], "dtable-v1");
    assert_eq!(v["rows"].as_array().unwrap().len(), 4);
    assert!(v["rows"].as_array().unwrap().iter().all(|r| r["d"] == 1));
}

#[test]
fn analyze_profile_classify_reach_boundary() {
    let dir = tempfile::tempdir().unwrap();
    dtlocal(&["gen", "--family", "u2", "--n", "3", "-o", "t.json"], dir.path());
    let v = stdout_json(&dtlocal(
        &["analyze", "--table", "t.json", "--reduction", "all"],
        dir.path(),
    ));
    assert_eq!(
        (v["N"].as_u64(), v["idim"].as_u64(), v["reduction_full_rows"].as_u64()),
        (Some(4), Some(1), Some(3))
    );

    let out = dtlocal(
        &["profile", "--family", "u1", "--n-max", "4", "--csv", "p.csv"],
        dir.path(),
    );
    assert!(out.status.success());
    let csv = std::fs::read_to_string(dir.path().join("p.csv")).unwrap();
    assert!(csv.starts_with("n,h_ld,h_la,L_ld,L_la,N,idim,m_hat\n1,"));
    assert_eq!(csv.lines().count(), 5);

    let v = stdout_json(&dtlocal(&["classify", "--family", "u3", "--n-max", "4"], dir.path()));
    assert_eq!(v["w_class"], "W3");
    let out = dtlocal(&["classify", "--family", "u3", "--n-max", "3"], dir.path());
    assert_eq!(out.status.code(), Some(2));

    let v = stdout_json(&dtlocal(
        &["reach", "--family", "u1", "--n", "5", "--kind", "la"],
        dir.path(),
    ));
    assert_eq!(v["reachable"], "no");
    let v = stdout_json(&dtlocal(
        &["reach", "--family", "u1", "--n", "7", "--kind", "ld"],
        dir.path(),
    ));
    assert_eq!(v["reachable"], "yes");
    assert_eq!(v["certificate"]["nodes"], 16);

    let v = stdout_json(&dtlocal(&["boundary", "--family", "u1", "--n", "5"], dir.path()));
    assert_eq!(
        (v["m_hat"].as_u64(), v["node_bound"].as_u64(), v["ok"].as_bool()),
        (Some(2), Some(19), Some(true))
    );
}
