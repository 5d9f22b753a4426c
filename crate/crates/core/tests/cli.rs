use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use selforg::cli::io::{ingest_csv, read_codebook, read_key_values};
use selforg::cli::run::{ASSIGNMENTS_FILE, CODEBOOK_FILE, CONFIG_FILE, EDGES_FILE, METRICS_FILE};
use selforg::som::{som_init, Topology};
use selforg::RandomStream;

fn selforg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_selforg"))
        .args(args)
        .env_remove(selforg::cli::OUTPUT_ENV)
        .output()
        .unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = selforg(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn synth_uniform_three_rows_and_repeatable() {
    let args = ["synth", "--kind", "uniform", "--n", "3", "--seed", "1"];
    let a = ok(&args);
    assert_eq!(a.lines().count(), 4, "header plus three rows");
    assert_eq!(a, ok(&args));
    assert!(a.lines().skip(1).all(|l| l.split(',').count() == 2));
}

#[test]
fn ingest_errors_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("bad.csv");
    fs::write(&data, "0,0\n1,1\n2\n").unwrap();
    let out = selforg(&["train", "--model", "som", "--data", s(&data), "--out", s(dir.path())]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bad.csv:3:"), "{err}");
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(selforg(&["train", "--bogus"]).status.code(), Some(2));
    assert_eq!(selforg(&[]).status.code(), Some(2));
    let out = selforg(&["train", "--data", "x.csv"]);
    assert_eq!(out.status.code(), Some(1), "a missing model is a runtime config error");
}

#[test]
fn unknown_config_key_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("d.csv");
    ok(&["synth", "--kind", "uniform", "--n", "20", "--out", s(&data)]);
    let out = selforg(&["train", "--model", "som", "--data", s(&data), "--has-header", "--set", "som.bogus=1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("som.bogus"));
}

#[test]
fn som_with_no_steps_exports_the_initial_codebook() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("d.csv");
    ok(&["synth", "--kind", "uniform", "--n", "50", "--seed", "2", "--out", s(&data)]);
    let out = dir.path().join("run");
    ok(&[
        "train", "--model", "som", "--data", s(&data), "--has-header", "--seed", "6", "--out", s(&out),
        "--set", "som.width=4", "--set", "som.height=3", "--set", "som.steps=0",
    ]);
    let dataset = ingest_csv(&data, true).unwrap();
    let init = som_init(4, 3, Topology::Rectangular, &dataset, &mut RandomStream::new(6)).unwrap();
    let codebook = read_codebook(&out.join(CODEBOOK_FILE)).unwrap();
    let stored: Vec<_> = codebook.units.iter().map(|u| u.w.clone()).collect();
    assert_eq!(stored, init.codebook());
}

#[test]
fn output_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("d.csv");
    ok(&["synth", "--kind", "uniform", "--n", "30", "--out", s(&data)]);
    let out = dir.path().join("env-out");
    let run = Command::new(env!("CARGO_BIN_EXE_selforg"))
        .args(["train", "--model", "sota", "--data", s(&data), "--has-header"])
        .env(selforg::cli::OUTPUT_ENV, &out)
        .output()
        .unwrap();
    assert!(run.status.success());
    for name in [CODEBOOK_FILE, EDGES_FILE, ASSIGNMENTS_FILE, METRICS_FILE, CONFIG_FILE] {
        assert!(out.join(name).is_file(), "{name}");
    }
}

#[test]
fn failed_write_removes_partial_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("d.csv");
    ok(&["synth", "--kind", "uniform", "--n", "30", "--out", s(&data)]);
    let out = dir.path().join("run");
    fs::create_dir_all(out.join(ASSIGNMENTS_FILE)).unwrap();
    let status = selforg(&["train", "--model", "gng", "--data", s(&data), "--has-header", "--out", s(&out)]).status;
    assert_eq!(status.code(), Some(1));
    assert!(!out.join(CODEBOOK_FILE).exists());
    assert!(!out.join(EDGES_FILE).exists());
    assert!(!out.join(METRICS_FILE).exists());
}

#[test]
fn gng_on_two_squares_reports_two_components() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("squares.csv");
    ok(&["synth", "--kind", "two-squares", "--n", "2000", "--seed", "3", "--out", s(&data)]);
    let out = dir.path().join("run");
    ok(&["train", "--model", "gng", "--data", s(&data), "--has-header", "--seed", "1", "--out", s(&out)]);
    let metrics = read_key_values(&out.join(METRICS_FILE)).unwrap();
    let components = metrics.iter().find(|(k, _)| k == "components").unwrap();
    assert_eq!(components.1, "2");
}

#[test]
fn sota_profile_mode_through_the_cli() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("seqs.csv");
    // Flattened one-hot sequences of length 3 over 2 symbols: two families.
    let rows = ["1,0,1,0,1,0", "1,0,1,0,0,1", "0,1,0,1,0,1", "0,1,0,1,1,0", "1,0,1,0,1,0", "0,1,0,1,0,1"];
    fs::write(&data, rows.join("\n") + "\n").unwrap();
    let out = dir.path().join("run");
    ok(&[
        "train", "--model", "sota", "--data", s(&data), "--out", s(&out),
        "--set", "sota.alphabet=2", "--set", "sota.metric=profile", "--set", "sota.resource_threshold=0.4",
    ]);
    let assigned = ok(&["assign", "--from", s(&out)]);
    assert_eq!(assigned, fs::read_to_string(out.join(ASSIGNMENTS_FILE)).unwrap());
    let units: Vec<&str> = assigned.lines().skip(1).map(|l| l.split(',').nth(1).unwrap()).collect();
    assert_eq!(units[0], units[1]);
    assert_eq!(units[2], units[3]);
    assert_ne!(units[0], units[2]);
}
