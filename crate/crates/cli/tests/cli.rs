use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn islands(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_islands"))
        .args(args)
        .current_dir(cwd)
        .env_remove("ISLANDS_CACHE")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_str(&stdout(out)).unwrap()
}

#[test]
fn construct_examples() {
    let dir = tempfile::tempdir().unwrap();
    let out = islands(&["construct", "nested-min", "--shape", "2,2"], dir.path());
    assert!(out.status.success());
    assert_eq!(json(&out)["bricks"].as_array().unwrap().len(), 3);

    let out = islands(
        &["construct", "subdivision", "--d", "3", "--k", "2"],
        dir.path(),
    );
    assert_eq!(json(&out)["bricks"].as_array().unwrap().len(), 9);

    let out = islands(
        &["construct", "nested-cubes", "--d", "2", "--m", "1"],
        dir.path(),
    );
    assert_eq!(
        stdout(&out).trim(),
        r#"{"shape":[1,1],"cubic":true,"bricks":[[[0,0],[1,1]]]}"#
    );

    let out = islands(
        &["construct", "minimal-family", "--shape", "2,1"],
        dir.path(),
    );
    assert_eq!(stdout(&out).lines().count(), 2);
}

#[test]
fn construct_rejects_bad_parameters() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["construct", "nested-min", "--shape", "2,0"][..],
        &["construct", "nested-cubes", "--d", "0", "--m", "2"],
        &["construct", "subdivision", "--d", "2", "--k", "0"],
        &["construct", "nested-min"],
    ] {
        assert_eq!(islands(args, dir.path()).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn construct_to_file_then_check() {
    let dir = tempfile::tempdir().unwrap();
    let out = islands(
        &[
            "construct",
            "nested-min",
            "--shape",
            "3,2,2",
            "--output",
            "h.json",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let out = islands(&["check", "h.json"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("laminar: true"));
    assert!(text.contains("maximal: true"));
    assert!(text.contains("size: 5"));
}

#[test]
fn check_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("touch.json"),
        r#"{"shape":[2,2],"cubic":false,"bricks":[[[0,0],[1,1]],[[1,1],[2,2]]]}"#,
    )
    .unwrap();
    let out = islands(&["check", "touch.json"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("laminar: false"));

    std::fs::write(
        dir.path().join("whole.json"),
        r#"{"shape":[2,2],"cubic":false,"bricks":[[[0,0],[2,2]]]}"#,
    )
    .unwrap();
    let out = islands(&["check", "whole.json"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("maximal: false"));

    std::fs::write(dir.path().join("junk.json"), "{not json").unwrap();
    assert_eq!(
        islands(&["check", "junk.json"], dir.path()).status.code(),
        Some(2)
    );
    assert_eq!(
        islands(&["check", "missing.json"], dir.path())
            .status
            .code(),
        Some(2)
    );

    // A brick sticking out of the cuboid is a parse-level error.
    std::fs::write(
        dir.path().join("out.json"),
        r#"{"shape":[2,2],"cubic":false,"bricks":[[[0,0],[3,1]]]}"#,
    )
    .unwrap();
    assert_eq!(
        islands(&["check", "out.json"], dir.path()).status.code(),
        Some(2)
    );
}

#[test]
fn system_round_trip_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let first = stdout(&islands(
        &["construct", "subdivision", "--d", "2", "--k", "3"],
        dir.path(),
    ));
    let parsed: islands::IslandSystem = serde_json::from_str(&first).unwrap();
    assert_eq!(
        format!("{}\n", serde_json::to_string(&parsed).unwrap()),
        first
    );
}

#[test]
fn search_examples() {
    let dir = tempfile::tempdir().unwrap();
    let run = |args: &[&str]| json(&islands(args, dir.path()));
    assert_eq!(
        run(&["search", "--shape", "3,3", "--mode", "min", "--no-cache"])["value"],
        5
    );
    assert_eq!(
        run(&[
            "search",
            "--shape",
            "3,3",
            "--cubic",
            "--mode",
            "max",
            "--no-cache"
        ])["value"],
        5
    );
    let v = run(&["search", "--shape", "2,2,2", "--mode", "max", "--no-cache"])["value"]
        .as_u64()
        .unwrap();
    assert!((4..=5).contains(&v));
    let flat = run(&[
        "search",
        "--shape",
        "3,3",
        "--mode",
        "min",
        "--engine",
        "flat",
        "--no-cache",
    ]);
    assert_eq!(flat["value"], 5);
}

#[test]
fn search_report_schema_and_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = islands(
        &["search", "--shape", "2,3", "--mode", "max", "--no-cache"],
        dir.path(),
    );
    let text = stdout(&out);
    let value: Value = serde_json::from_str(&text).unwrap();
    let keys: Vec<&str> = value
        .as_object()
        .unwrap()
        .keys()
        .map(String::as_str)
        .collect();
    for key in [
        "shape",
        "cubic",
        "mode",
        "value",
        "witness",
        "nodes",
        "memo_hits",
        "elapsed_ms",
    ] {
        assert!(keys.contains(&key), "missing {key}");
    }
    let parsed: islands::ExtremalReport = serde_json::from_str(&text).unwrap();
    assert_eq!(
        format!("{}\n", serde_json::to_string(&parsed).unwrap()),
        text
    );
}

#[test]
fn search_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = islands(
        &[
            "search",
            "--shape",
            "3,2",
            "--cubic",
            "--mode",
            "max",
            "--no-cache",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    let out = islands(
        &["search", "--shape", "3,3", "--mode", "median"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));

    let out = islands(
        &[
            "search",
            "--shape",
            "3,3",
            "--mode",
            "max",
            "--node-cap",
            "3",
            "--no-cache",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nodes"));
    let out = islands(
        &["search", "--shape", "6,6,6", "--mode", "max", "--no-cache"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn search_uses_and_fills_cache() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "search", "--shape", "3,3", "--mode", "max", "--cache", "c.jsonl",
    ];
    let first = stdout(&islands(&args, dir.path()));
    let stored = std::fs::read_to_string(dir.path().join("c.jsonl")).unwrap();
    assert_eq!(stored.lines().count(), 1);

    // A cached answer is served even under a node cap that would stop a fresh search.
    let mut capped = args.to_vec();
    capped.extend(["--node-cap", "1"]);
    let out = islands(&capped, dir.path());
    assert!(out.status.success());
    assert_eq!(stdout(&out), first);

    // A different engine tag misses the cache.
    let out = islands(
        &[
            "search",
            "--shape",
            "3,3",
            "--mode",
            "max",
            "--cache",
            "c.jsonl",
            "--engine",
            "flat",
            "--node-cap",
            "1",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn cache_path_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_islands"))
        .args(["search", "--shape", "2,2", "--mode", "min"])
        .current_dir(dir.path())
        .env("ISLANDS_CACHE", "env-cache.jsonl")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(dir.path().join("env-cache.jsonl").exists());
    assert!(!dir.path().join("islands-cache.jsonl").exists());
}

#[test]
fn verify_examples() {
    let dir = tempfile::tempdir().unwrap();
    let out = islands(
        &["verify", "theorem1", "--max-dim", "2", "--max-side", "3"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("shape,cubic,mode,expected,actual,status")
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 9);
    assert!(rows.iter().all(|r| r.ends_with(",PASS")));

    let out = islands(&["verify", "prior-work"], dir.path());
    assert_eq!(out.status.code(), Some(0));

    let out = islands(
        &[
            "verify",
            "classification",
            "--shape",
            "2,2",
            "--format",
            "json",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let rows = json(&out);
    assert_eq!(rows[0]["status"], "PASS");
    assert_eq!(rows[0]["shape"], serde_json::json!([2, 2]));
}

#[test]
fn verify_is_resumable_from_cache() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "verify",
        "theorem2",
        "--max-dim",
        "2",
        "--max-side",
        "3",
        "--cache",
        "v.jsonl",
    ];
    assert!(islands(&args, dir.path()).status.success());
    let after_first = std::fs::read_to_string(dir.path().join("v.jsonl")).unwrap();
    assert!(islands(&args, dir.path()).status.success());
    let after_second = std::fs::read_to_string(dir.path().join("v.jsonl")).unwrap();
    assert_eq!(after_first, after_second);
}

#[test]
fn verify_skips_and_strict() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "verify",
        "theorem1",
        "--shape",
        "3,3",
        "--node-cap",
        "2",
        "--no-cache",
    ];
    let out = islands(&args, dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("SKIPPED"));
    let mut strict = args.to_vec();
    strict.push("--strict");
    assert_eq!(islands(&strict, dir.path()).status.code(), Some(3));
    assert_eq!(
        islands(&["verify", "theorem9"], dir.path()).status.code(),
        Some(2)
    );
}

#[test]
fn formulas() {
    let dir = tempfile::tempdir().unwrap();
    let run = |args: &[&str]| stdout(&islands(args, dir.path())).trim().to_owned();
    assert_eq!(run(&["formula", "g", "--shape", "3,3"]), "5");
    assert_eq!(run(&["formula", "f2", "--m1", "3", "--m2", "3"]), "7");
    assert_eq!(run(&["formula", "g2prime", "--m", "4"]), "4");
    assert_eq!(run(&["formula", "fprime", "--d", "2", "--m", "3"]), "5");
    assert_eq!(run(&["formula", "hk", "--d", "3", "--k", "2"]), "9");
    assert_eq!(
        run(&["formula", "sandwich", "--shape", "2,2,2"]),
        r#"{"lower":"4","upper":"23/4"}"#
    );
    assert_eq!(
        islands(&["formula", "f2", "--m1", "0", "--m2", "3"], dir.path())
            .status
            .code(),
        Some(2)
    );
}
