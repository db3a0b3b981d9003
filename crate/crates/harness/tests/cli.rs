use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn qcut(args: &[&str]) -> String {
    let out = Command::new(env!("CARGO_BIN_EXE_qcut")).args(args).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qcut-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn generated_graph(family: &str, n: &str, seed: &str) -> (PathBuf, Value) {
    let doc: Value = serde_json::from_str(&qcut(&["--seed", seed, "gen", "--family", family, "--n", n])).unwrap();
    let path = scratch(&format!("{family}-{n}-{seed}.txt"));
    std::fs::write(&path, doc["graph"].as_str().unwrap()).unwrap();
    (path, doc)
}

#[test]
fn counterexample_through_the_cli() {
    let (graph, doc) = generated_graph("kpr-counterexample", "8", "0");
    let picks: Vec<String> = doc["certificate"]["Counterexample"]["picks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.to_string())
        .collect();
    let out: Value = serde_json::from_str(&qcut(&[
        "kpr",
        "--graph",
        graph.to_str().unwrap(),
        "--r",
        "10",
        "--rounds",
        "3",
        "--picks",
        &picks.join(","),
    ]))
    .unwrap();
    assert_eq!(out["bounded"], false);
    assert_eq!(out["max_retained_distance"], 50.0);
}

#[test]
fn tree_embedding_is_exact() {
    let (graph, _) = generated_graph("tree", "7", "4");
    let out: Value = serde_json::from_str(&qcut(&["embed", "tree-l1", "--graph", graph.to_str().unwrap()])).unwrap();
    assert!((out["distortion"].as_f64().unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn lowerbound_table() {
    let csv = qcut(&["--format", "csv", "lowerbound", "--n", "5"]);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("candidate,host_vertices,average_stretch,bound"));
    assert_eq!(lines.count(), 5);
}

#[test]
fn verify_reports_isometric_hosts() {
    let (graph, doc) = generated_graph("pathwidth-2", "8", "1");
    let bags: Vec<String> = doc["certificate"]["Path"]
        .as_array()
        .unwrap()
        .iter()
        .enumerate()
        .map(|(i, b)| {
            let verts: Vec<String> = b.as_array().unwrap().iter().map(|v| v.to_string()).collect();
            format!("{} {}", i as i64 - 1, verts.join(" "))
        })
        .collect();
    let pd = scratch("pw.bags");
    std::fs::write(&pd, bags.join("\n")).unwrap();
    let out: Value =
        serde_json::from_str(&qcut(&["verify", "--graph", graph.to_str().unwrap(), "--decomposition", pd.to_str().unwrap()]))
            .unwrap();
    let checks = out["checks"].as_array().unwrap();
    assert!(checks.iter().any(|c| c["host"] == "path-of-cliques"));
    assert!(checks.iter().all(|c| c["pass"] == true), "{out}");
}

#[test]
fn bad_input_fails_cleanly() {
    let out = Command::new(env!("CARGO_BIN_EXE_qcut"))
        .args(["gen", "--family", "cycle", "--n", "2"])
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("qcut:"));
}
