use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn solver() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../tools/ensh-sat")
}

fn ensh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ensh"))
        .args(args)
        .env("ENSH_SOLVER", solver())
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON value")
}

fn write(dir: &Path, name: &str, out: &Output) -> String {
    let path = dir.join(name);
    std::fs::write(&path, &out.stdout).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn decide_two_two_by_brute() {
    let out = ensh(&["--json", "decide", "--seq", "2,2", "--engine", "brute"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["kind"], "ensh-witness");
    assert_eq!(v["seq"], serde_json::json!([2, 2]));
    assert_eq!(v["coloring"].as_str().unwrap().len(), 16);
}

#[test]
fn cnf_header_for_four_twos() {
    let out = ensh(&["cnf", "--seq", "2,2,2,2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l == "p cnf 256 10880"));
    assert_eq!(text.lines().filter(|l| l.ends_with(" 0")).count(), 10880);
}

#[test]
fn refutation_verifies_as_trusted_solver() {
    let dir = tempfile::tempdir().unwrap();
    let out = ensh(&["--json", "decide", "--seq", "1,2", "--engine", "sat"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["evidence"]["method"], "unsat");
    let file = write(dir.path(), "r.json", &out);
    let check = ensh(&["--json", "verify", &file]);
    assert_eq!(check.status.code(), Some(0));
    assert_eq!(json(&check)["verdict"]["verdict"], "trusted-solver");
}

#[test]
fn check_sh_finds_a_word_for_a_constant_coloring() {
    let out = ensh(&[
        "--json",
        "check-sh",
        "--seq",
        "2,2",
        "--coloring",
        "1111111111111111",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["kind"], "sh-cert");
    assert_eq!(v["color"], 1);
    assert_eq!(v["s"], 0);
}

#[test]
fn prove2_report_carries_a_verifiable_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let out = ensh(&["--json", "prove2", "--oracle", "parity"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["blocks"], 913);
    assert_eq!(v["budget_blocks"], 913);
    assert!(v["queries"].as_u64().unwrap() < v["ceiling"].as_u64().unwrap());
    let file = write(dir.path(), "p.json", &out);
    assert_eq!(ensh(&["verify", &file]).status.code(), Some(0));
}

#[test]
fn tampered_certificate_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let out = ensh(&["--json", "decide", "--seq", "2,2", "--engine", "brute"]);
    let mut v = json(&out);
    v["coloring"] = Value::String("0".repeat(16));
    let path = dir.path().join("bad.json");
    std::fs::write(&path, v.to_string()).unwrap();
    let check = ensh(&["verify", path.to_str().unwrap()]);
    assert_eq!(check.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&check.stdout).contains("FAILED"));
}

#[test]
fn malformed_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cut.json");
    std::fs::write(&path, "{\"schema\":1,\"kind\":").unwrap();
    let out = ensh(&["verify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1 column"));
    assert_eq!(ensh(&["decide", "--seq", "2,x"]).status.code(), Some(2));
    assert_eq!(ensh(&["decide"]).status.code(), Some(2));
}

#[test]
fn missing_solver_exits_three() {
    let out = ensh(&[
        "decide",
        "--seq",
        "2,2",
        "--engine",
        "sat",
        "--solver",
        "/nonexistent/solver",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn transform_outputs_verify() {
    let dir = tempfile::tempdir().unwrap();
    for extra in [
        &["--subsequence", "0,2"][..],
        &["--dominate", "2,3,2"][..],
        &["--to-d", "3"][..],
    ] {
        let mut args = vec!["--json", "transform", "--seq", "2,2,2", "--known"];
        args.extend_from_slice(extra);
        let out = ensh(&args);
        assert_eq!(out.status.code(), Some(0), "{extra:?}");
        let file = write(dir.path(), "t.json", &out);
        assert_eq!(ensh(&["verify", &file]).status.code(), Some(0), "{extra:?}");
    }
}

#[test]
fn hj_number_and_refutation() {
    let v = json(&ensh(&["--json", "hj", "number", "--n", "1"]));
    assert_eq!(v["number"], 2);
    let out = ensh(&[
        "--json",
        "hj",
        "refute",
        "--n",
        "1",
        "--r",
        "2",
        "--coloring",
        "0110",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["kind"], "sh-cert");
}

#[test]
fn duel_passes_and_its_report_reverifies() {
    let dir = tempfile::tempdir().unwrap();
    let out = ensh(&[
        "--json",
        "duel",
        "--seq",
        "2,2",
        "--horizon",
        "8",
        "--strategy",
        "greedy:0",
        "--strategy",
        "greedy:3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let file = write(dir.path(), "d.json", &out);
    assert_eq!(ensh(&["verify", &file]).status.code(), Some(0));
}

#[test]
fn catalog_round_trip_and_conflict() {
    let dir = tempfile::tempdir().unwrap();
    let catalog = dir.path().join("cat.jsonl");
    let cat = catalog.to_str().unwrap();
    let out = ensh(&[
        "decide",
        "--seq",
        "2,2,2",
        "--engine",
        "sat",
        "--catalog",
        cat,
    ]);
    assert_eq!(out.status.code(), Some(0));

    let exact = json(&ensh(&[
        "--json", "catalog", "--file", cat, "query", "--seq", "2,2,2",
    ]));
    assert_eq!(exact.as_array().unwrap().len(), 1);
    let closure = json(&ensh(&[
        "--json",
        "catalog",
        "--file",
        cat,
        "query",
        "--seq",
        "2,2",
        "--closure",
    ]));
    let hits = closure.as_array().unwrap();
    assert!(!hits.is_empty());
    assert!(hits.iter().all(|h| h["derived"] == true));

    // a forged refutation for the same instance is refused before it is written
    let mut forged = exact[0]["entry"]["certificate"].clone();
    forged["kind"] = Value::String("ensh-refutation".into());
    forged["evidence"] = serde_json::json!({"method": "exhaustion", "colorings_checked": 0});
    let path = dir.path().join("forged.json");
    std::fs::write(&path, forged.to_string()).unwrap();
    let out = ensh(&["catalog", "--file", cat, "append", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let list = json(&ensh(&["--json", "catalog", "--file", cat, "list"]));
    assert_eq!(list.as_array().unwrap().len(), 1);
}
