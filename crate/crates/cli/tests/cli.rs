use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn zforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zforge")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

struct Work {
    dir: TempDir,
}

impl Work {
    fn new() -> Work {
        Work {
            dir: TempDir::new().unwrap(),
        }
    }

    fn file(&self, name: &str, text: &str) -> PathBuf {
        let p = self.dir.path().join(name);
        fs::write(&p, text).unwrap();
        p
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn two_party(&self) -> PathBuf {
        let f = self.file("f.txt", "(x1 AND x2) OR (x3 AND x4)\n");
        let c = self.path("c.json");
        let o = zforge(&["compile", s(&f), "--mode", "monotone", "-o", s(&c)]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        c
    }
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn compile_writes_circuit_json() {
    let w = Work::new();
    let c = w.two_party();
    let v: Value = serde_json::from_str(&fs::read_to_string(c).unwrap()).unwrap();
    assert_eq!(v["inputs"]["x1"], "x1");
    assert_eq!(v["expected_output_step"], 3);
    assert!(v["layers"].is_object() && v["vertices"].is_array() && v["edges"].is_array());
}

#[test]
fn compile_emits_dot_with_filled_helpers() {
    let w = Work::new();
    let f = w.file("f.txt", "(x1 AND x2) OR (x3 AND x4)");
    let extra = w.path("c.dot");
    let o = zforge(&["compile", s(&f), "--emit", "dot", "--dot", s(&extra)]);
    assert_eq!(code(&o), 0);
    let dot = String::from_utf8(o.stdout).unwrap();
    assert!(dot.starts_with("graph "));
    assert!(dot.contains("\"g2/3\" [shape=circle, style=filled"));
    assert_eq!(fs::read_to_string(extra).unwrap(), dot);
}

#[test]
fn compile_error_codes() {
    let w = Work::new();
    let not = w.file("not.txt", "NOT x1 OR x2");
    assert_eq!(code(&zforge(&["compile", s(&not), "--mode", "monotone"])), 3);
    assert_eq!(code(&zforge(&["compile", s(&not), "--mode", "dual-rail"])), 0);
    let broken = w.file("broken.txt", "x1 AND (x2");
    let o = zforge(&["compile", s(&broken)]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1, column 11"));
    let nand = w.file(
        "nand.json",
        r#"{"gates":[{"id":0,"kind":"NAND","inputs":[0,1],"outputs":[2]}],"primary_inputs":{"a":0,"b":1},"primary_output":2}"#,
    );
    assert_eq!(code(&zforge(&["compile", s(&nand)])), 3);
    assert_eq!(code(&zforge(&["compile", s(&w.path("missing.txt"))])), 4);
    let f = w.file("f.txt", "a AND b");
    assert_eq!(code(&zforge(&["compile", s(&f), "--filters", "--no-fanout-guard"])), 2);
}

#[test]
fn netlist_round_trip_through_compile() {
    let w = Work::new();
    let f = w.file("f.txt", "x1 OR (x2 AND x3)");
    let o = zforge(&["compile", s(&f), "--emit", "netlist"]);
    assert_eq!(code(&o), 0);
    let n = w.file("n.json", &String::from_utf8(o.stdout).unwrap());
    let c = w.path("c.json");
    assert_eq!(code(&zforge(&["compile", s(&n), "-o", s(&c)])), 0);
    let t = zforge(&["table", s(&c), "--format", "json"]);
    let rows = stdout_json(&t)["rows"].as_array().unwrap().clone();
    let outs: Vec<u64> = rows.iter().map(|r| r["outputs"][0].as_u64().unwrap()).collect();
    assert_eq!(outs, [0, 0, 0, 1, 1, 1, 1, 1]);
}

#[test]
fn simulate_prints_trace_and_checks_arity() {
    let w = Work::new();
    let c = w.two_party();
    let o = zforge(&["simulate", s(&c), "--input", "1100"]);
    assert_eq!(code(&o), 0);
    let v = stdout_json(&o);
    assert_eq!(v["output"], 1);
    assert_eq!(v["output_step"], 3);
    assert_eq!(v["steps"][0]["step"], 2);
    let idle = stdout_json(&zforge(&["simulate", s(&c), "--input", "0000"]));
    assert_eq!(idle["steps"], Value::Array(vec![]));
    assert_eq!(idle["output"], 0);
    assert_eq!(code(&zforge(&["simulate", s(&c), "--input", "110"])), 4);
}

#[test]
fn table_with_oracle() {
    let w = Work::new();
    let c = w.two_party();
    let o = zforge(&["table", s(&c), "--check-oracle"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().count(), 17);
    assert!(text.contains("1100 | 1 | 3"));
    assert_eq!(code(&zforge(&["table", s(&c), "--limit", "3"])), 5);

    // A tampered formula makes the oracle disagree.
    let mut v: Value = serde_json::from_str(&fs::read_to_string(&c).unwrap()).unwrap();
    v["formulas"] = serde_json::json!(["(x1 AND x2) AND (x3 AND x4)"]);
    let bad = w.file("bad.json", &v.to_string());
    assert_eq!(code(&zforge(&["table", s(&bad), "--check-oracle"])), 1);
}

#[test]
fn backforce_and_leakage_reports() {
    let w = Work::new();
    let c = w.two_party();
    let b = stdout_json(&zforge(&["backforce", s(&c)]));
    assert_eq!(b["assignments"].as_array().unwrap().len(), 16);
    assert_eq!(b["condition"], "input weight >= 3");
    let o = zforge(&["leakage", s(&c), "--parties", "A=x1,x2", "B=x3,x4"]);
    assert_eq!(code(&o), 0);
    let l = stdout_json(&o);
    assert_eq!(l["parties"]["A"]["choices"]["00"]["verdict"], "never_inferable");
    assert_eq!(l["parties"]["A"]["choices"]["10"]["verdict"], "always_inferable");
    assert_eq!(code(&zforge(&["leakage", s(&c), "--parties", "A=x1,x2", "B=x3"])), 4);
    assert_eq!(code(&zforge(&["leakage", s(&c), "--parties", "A:x1"])), 4);
}

#[test]
fn minzfs_and_gadget_export() {
    let w = Work::new();
    let tri = w.path("triangle.json");
    assert_eq!(code(&zforge(&["gadget", "and", "--export", "json", "-o", s(&tri)])), 0);
    let z = stdout_json(&zforge(&["minzfs", s(&tri)]));
    assert_eq!(z["size"], 2);
    let wire = stdout_json(&zforge(&["gadget", "wire", "--delay", "3"]));
    assert_eq!(wire["latency"], 3);
    assert_eq!(code(&zforge(&["gadget", "nope"])), 4);
    let v = stdout_json(&zforge(&["gadget", "filter", "--verify"]));
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);
    let big = w.file(
        "big.json",
        &serde_json::json!({
            "vertices": (0..25).map(|i| serde_json::json!({"id": i.to_string(), "color": "white"})).collect::<Vec<_>>(),
            "edges": []
        })
        .to_string(),
    );
    assert_eq!(code(&zforge(&["minzfs", s(&big)])), 5);
}

#[test]
fn run_and_search() {
    let w = Work::new();
    let g = w.file(
        "p.json",
        r#"{"vertices":[{"id":"a","color":"black"},{"id":"b","color":"white"},{"id":"c","color":"white"}],"edges":[["a","b"],["b","c"]]}"#,
    );
    let t = stdout_json(&zforge(&["run", s(&g), "--seed", "7"]));
    assert_eq!(t["final_black"], serde_json::json!(["a", "b", "c"]));
    let s_or = stdout_json(&zforge(&["search", "or", "--max-vertices", "4"]));
    assert_eq!(s_or["min_vertices"], 4);
    assert!(!s_or["non_propagating"].as_array().unwrap().is_empty());
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let w = Work::new();
    let c = w.two_party();
    for args in [
        vec!["backforce", s(&c)],
        vec!["leakage", s(&c), "--parties", "A=x1,x2", "B=x3,x4"],
        vec!["table", s(&c), "--format", "json"],
    ] {
        assert_eq!(zforge(&args).stdout, zforge(&args).stdout);
    }
}
