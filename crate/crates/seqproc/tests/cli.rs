use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use seqproc::cli::{run, EXIT_FAILURE, EXIT_HORIZON, EXIT_OK, EXIT_USAGE};
use seqproc::experiments::EXPERIMENTS;
use seqproc::Lts;
use serde_json::Value;
use tempfile::TempDir;

struct Outcome {
    code: i32,
    out: String,
    err: String,
}

fn seqproc(args: &[&str]) -> Outcome {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("seqproc").chain(args.iter().copied()), &mut out, &mut err);
    Outcome {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const RUNNING: &str = "X = a.X ; Y + b.1\nY = c.1 + 1\n";

#[test]
fn check_accepts_a_guarded_spec() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "running.spec", RUNNING);
    let r = seqproc(&["check", s(&spec)]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    assert!(r.out.contains("guarded spec, 2 equations, root X, GNF"), "{}", r.out);
}

#[test]
fn check_reports_the_unguarded_name() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "paradox.spec", "X = X ; Y + 1\nY = a.1\n");
    let r = seqproc(&["check", s(&spec)]);
    assert_eq!(r.code, EXIT_FAILURE);
    assert!(r.err.contains("unguarded: X"), "{}", r.err);

    let r = seqproc(&["--json", "check", s(&spec)]);
    let v: Value = serde_json::from_str(&r.out).unwrap();
    assert_eq!(v["offending"], serde_json::json!(["X"]));
}

#[test]
fn input_errors_exit_with_failure() {
    let dir = TempDir::new().unwrap();
    let missing = dir.path().join("missing.spec");
    assert_eq!(seqproc(&["check", s(&missing)]).code, EXIT_FAILURE);

    let broken = write(&dir, "broken.json", "{\"states\": [");
    let r = seqproc(&["check", s(&broken)]);
    assert_eq!(r.code, EXIT_FAILURE);
    assert!(!r.err.is_empty());

    let bad_pda = write(&dir, "bad.json", "{\"initialStack\": 3}");
    assert_eq!(seqproc(&["check", s(&bad_pda)]).code, EXIT_FAILURE);

    let syntax = write(&dir, "syntax.spec", "X = a.(\n");
    assert_eq!(seqproc(&["lts", s(&syntax)]).code, EXIT_FAILURE);
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "running.spec", RUNNING);
    assert_eq!(seqproc(&["frobnicate"]).code, EXIT_USAGE);
    assert_eq!(seqproc(&["lts", s(&spec), "--depth", "0"]).code, EXIT_USAGE);
    assert_eq!(seqproc(&["lts", s(&spec), "--mode", "lazy"]).code, EXIT_USAGE);
    assert_eq!(seqproc(&["equiv", s(&spec), s(&spec), "--kind", "k"]).code, EXIT_USAGE);
    assert_eq!(seqproc(&["demo", "no-such-demo"]).code, EXIT_USAGE);
    assert_eq!(seqproc(&["--help"]).code, EXIT_OK);
}

#[test]
fn lts_export_is_byte_identical_across_runs() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "running.spec", RUNNING);
    let a = seqproc(&["lts", s(&spec), "--depth", "6"]);
    let b = seqproc(&["lts", s(&spec), "--depth", "6"]);
    assert_eq!(a.code, EXIT_OK);
    assert_eq!(a.out, b.out);
    let lts = Lts::from_json(&a.out).unwrap();
    assert!(lts.has_frontier());
    assert!(lts.states.iter().all(|st| st.depth <= 6));

    let dot = seqproc(&["lts", s(&spec), "--depth", "2", "--format", "dot"]);
    assert!(dot.out.starts_with("digraph"), "{}", dot.out);

    let out = dir.path().join("out.json");
    let r = seqproc(&["lts", s(&spec), "--depth", "6", "--out", s(&out)]);
    assert_eq!(r.code, EXIT_OK);
    assert_eq!(fs::read_to_string(&out).unwrap(), a.out);
}

#[test]
fn compiled_pda_is_equivalent_to_its_spec() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "running.spec", RUNNING);
    let pda = dir.path().join("running.pda.json");
    let r = seqproc(&["compile-pda", s(&spec), "--out", s(&pda)]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    assert_eq!(seqproc(&["check", s(&pda)]).code, EXIT_OK);

    let r = seqproc(&["equiv", s(&spec), s(&pda), "--depth", "8"]);
    assert_eq!(r.code, EXIT_OK, "{}{}", r.out, r.err);
    assert!(r.out.starts_with("equivalent"), "{}", r.out);

    let r = seqproc(&["--json", "equiv", s(&spec), s(&pda), "--kind", "k", "--k", "5"]);
    let v: Value = serde_json::from_str(&r.out).unwrap();
    assert_eq!(v["verdict"]["outcome"], "equivalent");
    assert_eq!(v["kind"], "k=5");
}

#[test]
fn verdicts_map_to_exit_codes() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.spec", "a.b.1\n");
    let b = write(&dir, "b.spec", "a.c.1\n");
    let r = seqproc(&["equiv", s(&a), s(&b)]);
    assert_eq!(r.code, EXIT_FAILURE);
    assert!(r.out.contains("distinguishing formula"), "{}", r.out);

    let tau = write(&dir, "tau.spec", "a.tau.b.1\n");
    assert_eq!(seqproc(&["equiv", s(&a), s(&tau), "--kind", "branching"]).code, EXIT_OK);
    assert_eq!(seqproc(&["equiv", s(&a), s(&tau), "--kind", "strong"]).code, EXIT_FAILURE);

    // Inside a window, even a system against itself needs successors past the horizon.
    let spec = write(&dir, "running.spec", RUNNING);
    let r = seqproc(&["equiv", s(&spec), s(&spec), "--kind", "branching", "--depth", "4"]);
    assert_eq!(r.code, EXIT_HORIZON, "{}", r.out);
    assert!(r.out.contains("beyond the exploration horizon"), "{}", r.out);
    let counter = write(&dir, "counter.spec", "X = a.X ; Y + b.1\nY = c.1 + 1\nX\n");
    let other = write(&dir, "other.spec", "X = a.X ; Y + b.1\nY = c.1\nX\n");
    let r = seqproc(&["equiv", s(&counter), s(&other), "--kind", "dp-branching", "--depth", "3"]);
    assert_ne!(r.code, EXIT_OK, "{}", r.out);
}

#[test]
fn demo_manifest_lists_every_experiment() {
    let r = seqproc(&["demo"]);
    assert_eq!(r.code, EXIT_OK);
    let manifest: Value = serde_json::from_str(&r.out).unwrap();
    let names: Vec<&str> = manifest
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["name"].as_str().unwrap())
        .collect();
    let expected: Vec<&str> = EXPERIMENTS.iter().map(|e| e.name).collect();
    assert_eq!(names, expected);
}

#[test]
fn branching_degree_demo_prints_its_table() {
    let r = seqproc(&["demo", "branching-degree"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    assert!(r.out.starts_with("branching-degree: holds"), "{}", r.out);

    let r = seqproc(&["--json", "demo", "branching-degree"]);
    let v: Value = serde_json::from_str(&r.out).unwrap();
    assert_eq!(v["holds"], true);
}

#[test]
fn binary_reports_exit_status() {
    let exe = env!("CARGO_BIN_EXE_seqproc");
    let status = Command::new(exe).arg("version").output().unwrap();
    assert_eq!(status.status.code(), Some(EXIT_OK));
    assert!(String::from_utf8_lossy(&status.stdout).starts_with("seqproc "));
    let status = Command::new(exe).args(["demo", "nope"]).output().unwrap();
    assert_eq!(status.status.code(), Some(EXIT_USAGE));
}
