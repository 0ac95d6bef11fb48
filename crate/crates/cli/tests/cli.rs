use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gpp-bound"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).env("GPP_THREADS", "2").output().expect("spawn gpp-bound")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn records(text: &str) -> Vec<Value> {
    text.lines().filter(|l| !l.trim().is_empty()).map(|l| serde_json::from_str(l).unwrap()).collect()
}

fn summary(recs: &[Value]) -> &Value {
    recs.iter().find(|r| r["type"] == "summary").expect("summary record")
}

#[test]
fn gen_writes_a_readable_instance() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.txt");
    let o = run(&["gen", "gnp", "--n", "12", "--degree", "4", "--seed", "3", "-o", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(Path::new(&path).exists());

    let o = run(&["oracle", "--file", path.to_str().unwrap(), "--equipartition", "--k", "3"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert!(out.contains("optimum:"), "{out}");
    assert!(out.contains("heuristic ub:"), "{out}");
}

#[test]
fn gen_to_stdout_is_deterministic() {
    let a = run(&["gen", "spinglass2pm", "--nr", "4", "--seed", "9"]);
    let b = run(&["gen", "spinglass2pm", "--nr", "4", "--seed", "9"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
}

#[test]
fn solve_prints_table() {
    let o = run(&["solve", "--family", "gnp", "--n", "10", "--degree", "4", "--equipartition", "--k", "2", "--max-outer", "2"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    for col in ["graph", "ub", "lb", "#cuts", "#outer"] {
        assert!(out.contains(col), "missing {col} in {out}");
    }
    assert!(out.contains("stop:"), "{out}");
}

#[test]
fn solve_jsonl_has_outer_and_summary_records() {
    let o = run(&[
        "solve", "--family", "gnp", "--n", "10", "--degree", "4", "--equipartition", "--k", "2", "--max-outer", "2", "--jsonl", "-",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let recs = records(&stdout(&o));
    assert!(recs.iter().any(|r| r["type"] == "outer"));
    let s = summary(&recs);
    let lb = s["lb"].as_f64().unwrap();
    let ub = s["ub"].as_f64().unwrap();
    assert!(lb <= ub + 1e-9, "lb {lb} above ub {ub}");
    assert_eq!(s["n"], 10);
}

#[test]
fn bisection_sizes_follow_m1() {
    let o = run(&[
        "solve", "--family", "gnp", "--n", "100", "--degree", "5", "--bisection", "--m1", "65", "--max-time", "0", "--ub", "1000", "--jsonl", "-",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let recs = records(&stdout(&o));
    let s = summary(&recs);
    assert_eq!(s["m"], serde_json::json!([65, 35]));
    assert_eq!(s["stop"], "TimeLimit");
}

#[test]
fn same_seed_gives_same_report() {
    let args = [
        "solve", "--family", "spinglass2pm", "--nr", "3", "--bisection", "--m1", "5", "--seed", "4", "--max-outer", "3", "--jsonl", "-",
    ];
    let strip = |o: &Output| {
        records(&stdout(o))
            .into_iter()
            .map(|mut r| {
                r.as_object_mut().unwrap().remove("wall_time");
                r
            })
            .collect::<Vec<_>>()
    };
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(strip(&a), strip(&b));
}

#[test]
fn usage_errors_exit_nonzero() {
    let o = run(&["solve", "--family", "gnp", "--n", "10", "--degree", "3"]);
    assert!(!o.status.success());
    let o = run(&["solve", "--family", "gnp", "--n", "10", "--degree", "3", "--equipartition", "--k", "3"]);
    assert!(!o.status.success(), "10 vertices cannot split into 3 equal parts");
    let o = run(&["frobnicate"]);
    assert!(!o.status.success());
}

#[test]
fn verify_passes() {
    let o = run(&["verify", "--instances", "3"]);
    assert!(o.status.success(), "{}{}", stdout(&o), String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("PASS"));
}

#[test]
fn thread_count_does_not_change_the_report() {
    let solve = |threads: &str| {
        let o = bin()
            .args(["--threads", threads, "solve", "--family", "gnp", "--n", "24", "--degree", "5", "--equipartition", "--k", "4"])
            .args(["--max-outer", "3", "--jsonl", "-"])
            .output()
            .unwrap();
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        records(&stdout(&o))
            .into_iter()
            .map(|mut r| {
                r.as_object_mut().unwrap().remove("wall_time");
                r
            })
            .collect::<Vec<_>>()
    };
    assert_eq!(solve("1"), solve("3"));
}
