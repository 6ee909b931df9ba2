use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_farey-lab"))
        .args(args)
        .env_remove("FAREY_LAB_SEED")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn dot_of_third_halved_graph_has_nine_nodes() {
    let o = run(&["gen", "halved", "--order", "3", "--format", "dot"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let nodes = text
        .lines()
        .filter(|l| l.trim_end().ends_with(';') && !l.contains("--"))
        .count();
    let edges = text.lines().filter(|l| l.contains("--")).count();
    assert_eq!((nodes, edges), (9, 15));
}

#[test]
fn generated_graph_json_follows_schema_and_metadata_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let meta = dir.path().join("meta.json");
    let o = run(&[
        "gen",
        "ghf",
        "--lengths",
        "1,2,3",
        "--order",
        "2",
        "--metadata",
        s(&meta),
    ]);
    assert!(o.status.success());
    let g = json(&o);
    assert_eq!(g["vertices"].as_array().unwrap().len(), 7);
    assert_eq!(g["edges"].as_array().unwrap().len(), 1 + 2 + 6);
    let m: Value = serde_json::from_str(&std::fs::read_to_string(meta).unwrap()).unwrap();
    assert_eq!(m["paths"].as_array().unwrap().len(), 3);
    assert_eq!(m["order"].as_array().unwrap().len(), 7);
    assert!(m["levels"].is_object());
}

#[test]
fn farey_counts() {
    let g = json(&run(&["gen", "farey", "--order", "3"]));
    assert_eq!(g["vertices"].as_array().unwrap().len(), 16);
    assert_eq!(g["edges"].as_array().unwrap().len(), 29);
}

#[test]
fn outputs_are_byte_identical() {
    let a = run(&["gen", "halved", "--order", "5", "--format", "grain-line"]);
    let b = run(&["gen", "halved", "--order", "5", "--format", "grain-line"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn grain_line_check_reports_order_violation() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["gen", "halved", "--order", "3", "--format", "grain-line"]);
    let good = write(dir.path(), "good.json", &stdout(&o));
    assert!(run(&["grainline", "check", s(&good)]).status.success());

    // Swap the two depth-at-most-2 vertices between x and y in L.
    let mut gl = json(&o);
    let l = gl["L"].as_array_mut().unwrap();
    let i = l.iter().position(|v| v == "1/0/1").unwrap();
    let j = l.iter().position(|v| v == "2/0/1").unwrap();
    l.swap(i, j);
    let bad = write(dir.path(), "bad.json", &gl.to_string());
    let o = run(&["grainline", "check", s(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    let report = json(&o);
    assert_eq!(report["valid"], false);
    assert!(!report["violations"].as_array().unwrap().is_empty());
}

#[test]
fn malformed_json_gives_location() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "broken.json", "{\"x\": \"x\",\n \"y\": }");
    let o = run(&["grainline", "check", s(&p)]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("line 2, column"), "{err}");
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(
        run(&["gen", "ghf", "--lengths", "1,0", "--order", "1"]).status.code(),
        Some(1)
    );
    assert_eq!(run(&["nonsense"]).status.code(), Some(1));
}

#[test]
fn immersion_build_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["gen", "halved", "--order", "5", "--format", "grain-line"]);
    let host = write(dir.path(), "hf5.json", &stdout(&o));
    let o = run(&["immerse", "build", "--order", "2", "--host", s(&host)]);
    assert!(o.status.success());
    let model = json(&o);
    assert_eq!(model["strong"], true);
    assert!(model["routes"].as_object().unwrap().keys().all(|k| k.contains('-')));
    let m = write(dir.path(), "model.json", &stdout(&o));
    let o = run(&["immerse", "verify", s(&m)]);
    assert!(o.status.success());
    assert_eq!(json(&o)["valid"], true);

    // Reusing one route for two edges breaks edge-disjointness.
    let mut broken = model.clone();
    let routes = broken["routes"].as_object_mut().unwrap();
    let keys: Vec<String> = routes.keys().cloned().collect();
    let first = routes[&keys[0]].clone();
    routes.insert(keys[1].clone(), first);
    let b = write(dir.path(), "broken.json", &broken.to_string());
    assert_eq!(run(&["immerse", "verify", s(&b)]).status.code(), Some(2));
}

#[test]
fn budget_exhaustion_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let k3 = write(dir.path(), "k3.json", &stdout(&run(&["gen", "halved", "--order", "1"])));
    let host = write(dir.path(), "h.json", &stdout(&run(&["gen", "halved", "--order", "4"])));
    let o = run(&[
        "immerse",
        "brute",
        "--pattern",
        s(&k3),
        "--host",
        s(&host),
        "--strong",
        "--budget",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(json(&o)["outcome"]["status"], "unknown");
    let o = run(&["immerse", "brute", "--pattern", s(&k3), "--host", s(&host), "--strong"]);
    assert!(o.status.success());
    assert_eq!(json(&o)["outcome"]["status"], "found");
}

#[test]
fn separation_commands() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(
        dir.path(),
        "bowtie.json",
        r#"{"vertices":["a","b","c","d","w"],"edges":[["a","b"],["a","w"],["b","w"],["c","d"],["c","w"],["d","w"]]}"#,
    );
    // Two edge-disjoint routes join any two vertices through `w`.
    let blocks = json(&run(&["sep", "blocks", s(&g), "--c", "2"]));
    assert_eq!(blocks.as_array().unwrap().len(), 1);
    let bridged = write(
        dir.path(),
        "bridged.json",
        r#"{"vertices":["a","b","c","d","e","f"],"edges":[["a","b"],["a","c"],["b","c"],["c","d"],["d","e"],["d","f"],["e","f"]]}"#,
    );
    let tcd = json(&run(&["sep", "tcd", s(&bridged), "--c", "2"]));
    assert_eq!(tcd["parts"].as_array().unwrap().len(), 2);
    assert_eq!(tcd["adhesion"], serde_json::json!([[["c", "d"]]]));
    let found = json(&run(&[
        "sep",
        "find",
        s(&g),
        "--u",
        "a",
        "--v",
        "c",
        "--s",
        "1",
        "--f",
        "0",
    ]));
    assert_eq!(found["separator"], serde_json::json!(["w"]));
    let o = run(&["sep", "faithful", s(&g), "--w", "w", "--c", "1"]);
    assert!(o.status.success());
    assert_eq!(json(&o)["separations"].as_array().unwrap().len(), 2);
}

#[test]
fn subdivision_and_thm31() {
    let dir = tempfile::tempdir().unwrap();
    let line = write(
        dir.path(),
        "f4.json",
        &stdout(&run(&["gen", "halved", "--order", "4", "--format", "grain-line"])),
    );
    let o = run(&["minors", "thm31", "--families", s(&line), "--horizon", "2"]);
    assert!(o.status.success());
    let r = json(&o);
    assert_eq!(r["conclusive"], false);
    assert_eq!(r["report"]["families"][0]["status"], "absent");
    assert_eq!(r["report"]["lengths"], serde_json::json!([2, 5, 17]));
}

#[test]
fn dive_command_checks_its_trace() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["gen", "halved", "--order", "6", "--format", "grain-line"]);
    let outer = write(dir.path(), "outer.json", &stdout(&o));
    // Keep the even paths and the L vertices they carry.
    let mut inner = json(&o);
    let paths: Vec<Value> = inner["paths"].as_array().unwrap().iter().step_by(2).cloned().collect();
    let on: std::collections::BTreeSet<String> = paths
        .iter()
        .flat_map(|p| p.as_array().unwrap().iter().map(|v| v.as_str().unwrap().to_string()))
        .collect();
    let l: Vec<Value> = inner["L"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|v| on.contains(v.as_str().unwrap()))
        .cloned()
        .collect();
    inner["paths"] = Value::Array(paths);
    inner["L"] = Value::Array(l);
    let inner = write(dir.path(), "inner.json", &inner.to_string());
    let o = run(&[
        "minors",
        "dive",
        "--outer",
        s(&outer),
        "--inner",
        s(&inner),
        "--k-max",
        "2",
        "--lengths",
        "1,2,2,2,2,2,2",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r = json(&o);
    assert!(r["failures"].as_array().unwrap().is_empty());
    assert_eq!(r["trace"]["depths"], serde_json::json!([2, 4]));
}

#[test]
fn export_labels_grain_line_edges_with_depth() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(
        dir.path(),
        "gl.json",
        &stdout(&run(&["gen", "halved", "--order", "2", "--format", "grain-line"])),
    );
    let dot = stdout(&run(&["export", s(&p)]));
    assert!(dot.starts_with("graph G {"));
    assert!(dot.contains("\"x\" -- \"y\" [label=\"0\"]"));
}

#[test]
fn harness_single_criterion_and_seed_from_env() {
    let o = Command::new(env!("CARGO_BIN_EXE_farey-lab"))
        .args(["harness", "acceptance", "--suite", "6"])
        .env("FAREY_LAB_SEED", "17")
        .output()
        .unwrap();
    assert!(o.status.success());
    let r = json(&o);
    assert_eq!(r["seed"], 17);
    assert_eq!(r["passed"], true);
    assert_eq!(r["criteria"][0]["id"], 6);
    assert_eq!(run(&["harness", "acceptance", "--suite", "12"]).status.code(), Some(1));
}
