use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn las(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_las"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn file(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn solve_lists_answer_sets() {
    let dir = tempfile::tempdir().unwrap();
    let prog = file(dir.path(), "p.lp", "a :- not b. b :- not a.");
    let out = las(&["solve", &prog]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let sets: Vec<Vec<String>> = v["answer_sets"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| {
            s["atoms"]
                .as_array()
                .unwrap()
                .iter()
                .map(|a| a.as_str().unwrap().to_string())
                .collect()
        })
        .collect();
    assert_eq!(sets.len(), 2);
    assert!(sets.contains(&vec!["a".to_string()]) && sets.contains(&vec!["b".to_string()]));
}

#[test]
fn solve_reports_optimum_with_costs() {
    let dir = tempfile::tempdir().unwrap();
    let prog = file(dir.path(), "p.lp", "1 { a; b } 1. :~ a.[2@1] :~ b.[1@1]");
    let v = json(&las(&["solve", &prog]));
    assert_eq!(v["optimal"], true);
    assert_eq!(v["answer_sets"][0]["atoms"][0], "b");
    assert_eq!(v["answer_sets"][0]["cost"][0]["weight"], 1);
}

#[test]
fn exit_codes_for_unsatisfiable_and_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let unsat = file(dir.path(), "u.lp", "a. :- a.");
    assert_eq!(las(&["solve", &unsat]).status.code(), Some(1));
    let broken = file(dir.path(), "b.lp", "a :- .");
    let out = las(&["solve", &broken]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    assert_eq!(
        las(&["solve", "/nonexistent/file.lp"]).status.code(),
        Some(2)
    );
}

#[test]
fn ground_prints_instances() {
    let dir = tempfile::tempdir().unwrap();
    let prog = file(dir.path(), "p.lp", "n(1..3). m(X) :- n(X), X > 1.");
    let v = json(&las(&["ground", &prog]));
    let text = v["program"].as_str().unwrap();
    assert!(
        text.contains("m(2)") && text.contains("m(3)") && !text.contains("m(1)"),
        "{text}"
    );
}

#[test]
fn learn_finds_optimum_and_is_repeatable() {
    let dir = tempfile::tempdir().unwrap();
    let task = file(
        dir.path(),
        "t.las",
        "1 ~ a.\n1 ~ b.\n#pos(p1@3, {a}, {}).\n#pos(p2@1, {}, {b}).\n#neg(n1@1, {a}, {}).\n",
    );
    let runs: Vec<Output> = (0..3)
        .map(|_| las(&["learn", &task, "--seed", "7"]))
        .collect();
    for out in &runs {
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(out.stdout.len(), runs[0].stdout.len());
    }
    let v = json(&runs[0]);
    assert_eq!(v["hypothesis"], serde_json::json!(["a."]));
    assert_eq!(v["score"], "2");
    assert_eq!(v["certified"], true);
    assert_eq!(v["seed"], 7);
    let strip = |v: &Value| {
        let mut v = v.clone();
        v.as_object_mut().unwrap().remove("runtime_seconds");
        v
    };
    for out in &runs[1..] {
        assert_eq!(strip(&json(out)), strip(&v));
    }
}

#[test]
fn learn_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let unsat = file(
        dir.path(),
        "u.las",
        "1 ~ a.\n#pos(p@inf, {a}, {}).\n#neg(n@inf, {a}, {}).\n",
    );
    assert_eq!(las(&["learn", &unsat]).status.code(), Some(1));
    let bad = file(dir.path(), "b.las", "#pos(p@0, {a}, {}).\n");
    assert_eq!(las(&["learn", &bad]).status.code(), Some(2));
}

#[test]
fn node_budget_exhaustion_returns_incumbent() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("bench");
    let gen = las(&[
        "gen",
        "hamilton",
        "--n",
        "12",
        "--seed",
        "1",
        "--test-size",
        "5",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(gen.status.code(), Some(0));
    let task = out_dir.join("task.las");
    let out = las(&["learn", task.to_str().unwrap(), "--nodes", "3"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["certified"], false);
}

#[test]
fn gen_then_eval_target() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("j");
    let gen = las(&[
        "gen",
        "journey",
        "--n",
        "6",
        "--noise",
        "0.2",
        "--seed",
        "3",
        "--test-size",
        "20",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(gen.status.code(), Some(0));
    let meta = json(&gen);
    assert_eq!(meta["flipped"].as_array().unwrap().len(), 1);
    let h = file(dir.path(), "w.lp", las_harness::journey::W_STAR);
    let test = out_dir.join("test.json");
    let out = las(&[
        "eval",
        "--hypothesis",
        &h,
        "--test",
        test.to_str().unwrap(),
        "--family",
        "journey",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["accuracy"], 1.0);
    let wrong = las(&[
        "eval",
        "--hypothesis",
        &h,
        "--test",
        test.to_str().unwrap(),
        "--family",
        "hamilton",
    ]);
    assert_eq!(wrong.status.code(), Some(2));
}
