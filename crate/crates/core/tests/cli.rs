use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_nkcross"))
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn nkcross")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn lemma2_certificate_from_flags() {
    let out = run(&["verify-lemma2", "--n", "3", "--k", "2", "--h", "0.5,0.6,0.7", "--no-timestamp"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["subcommand"], "verify-lemma2");
    let w = &v["result"]["certificate"]["witness"];
    assert!((w["ratio"].as_f64().unwrap() - 0.8).abs() < 1e-12);
    let r: f64 = w["r"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).sum();
    let s: f64 = w["s"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).sum();
    assert!((r - 1.0).abs() < 1e-12 && (s - 2.0).abs() < 1e-12);
}

#[test]
fn order_above_dimension_exits_2_with_json_error() {
    let out = run(&["verify-lemma2", "--n", "3", "--k", "4", "--h", "0.5,0.6,0.7"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["schema_version"], 1);
    assert!(err["error"]["message"].as_str().unwrap().contains("order"));
}

#[test]
fn unknown_flag_and_bad_config_exit_2() {
    assert_eq!(run(&["extremal", "--bogus"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "k = 1\nunknown_key = 3\n").unwrap();
    assert_eq!(run(&["cross", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn selftest_passes() {
    let out = run(&["selftest", "--no-timestamp"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    assert_eq!(stdout_json(&out)["passed"], true);
}

#[test]
fn reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = fixture("three_fold.toml");
    let mut texts = Vec::new();
    for i in 0..2 {
        let json = dir.path().join(format!("r{i}.json"));
        let out = run(&[
            "extend",
            "--config",
            cfg.to_str().unwrap(),
            "--samples",
            "20",
            "--out",
            json.to_str().unwrap(),
            "--no-timestamp",
        ]);
        assert_eq!(out.status.code(), Some(0));
        texts.push(std::fs::read(&json).unwrap());
    }
    assert_eq!(texts[0], texts[1]);
}

#[test]
fn fixtures_run_and_pass() {
    for (cmd, file) in [
        ("extend", "two_fold.toml"),
        ("cross", "three_fold.toml"),
        ("verify-lemma1", "lemma_grid.toml"),
        ("verify-lemma2", "witness.toml"),
    ] {
        let out = run(&[cmd, "--config", fixture(file).to_str().unwrap(), "--no-timestamp"]);
        assert_eq!(out.status.code(), Some(0), "{cmd} {file}: {}", String::from_utf8_lossy(&out.stderr));
        let v = stdout_json(&out);
        assert_eq!(v["subcommand"], cmd);
        assert_eq!(v["passed"], true);
    }
}

#[test]
fn csv_headers() {
    let dir = tempfile::tempdir().unwrap();
    for (args, header) in [
        (vec!["extremal", "--nx", "33"], "re,im,h"),
        (vec!["cross", "--n", "2", "--k", "1", "--nx", "33"], "re,im,inside"),
    ] {
        let csv = dir.path().join(format!("{}.csv", args[0]));
        let mut full = args.clone();
        full.extend(["--csv", csv.to_str().unwrap()]);
        let out = run(&full);
        assert!(out.status.code().is_some_and(|c| c <= 1));
        let text = std::fs::read_to_string(&csv).unwrap();
        assert_eq!(text.lines().next(), Some(header));
        assert!(text.lines().count() > 1);
    }
}

#[test]
fn pole_oracle_fails_check() {
    let out = run(&["extend", "--n", "2", "--k", "1", "--oracle", "pole", "--no-timestamp"]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "BoundViolated");
}
