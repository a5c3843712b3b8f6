//! Command-line surface: exit codes, CSV layout and reproducibility.

use std::path::Path;
use std::process::{Command, Output};

fn critpair(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_critpair")).args(args).output().unwrap()
}

fn out_arg(dir: &Path) -> String {
    dir.to_str().unwrap().to_string()
}

#[test]
fn pair_writes_trials_summary_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = critpair(&["pair", "--n", "120", "--trials", "6", "--seed", "4", "--threads", "2", "--out", &out_arg(dir.path())]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let trials = std::fs::read_to_string(dir.path().join("trials.csv")).unwrap();
    let mut lines = trials.lines();
    assert_eq!(
        lines.next().unwrap(),
        "trial,seed,found,count_in_disk,zeta_re,zeta_im,stat_re,stat_im,miss_R0,miss_R1,miss_R2"
    );
    assert_eq!(lines.count(), 6);
    let summary = std::fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    assert!(summary.starts_with("metric,value\n"));
    assert!(summary.contains("uniqueness_frequency,"));
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["config"]["master_seed"], 4);
    assert_eq!(manifest["config"]["n"], 120);
    assert!(String::from_utf8_lossy(&out.stdout).contains("found_frequency,"));
}

#[test]
fn thread_count_does_not_change_output() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for (dir, threads) in [(&a, "1"), (&b, "3")] {
        let out = critpair(&["clt", "--n", "60", "--trials", "9", "--threads", threads, "--out", &out_arg(dir.path())]);
        assert_eq!(out.status.code(), Some(0));
    }
    for f in ["trials.csv", "summary.csv"] {
        assert_eq!(
            std::fs::read(a.path().join(f)).unwrap(),
            std::fs::read(b.path().join(f)).unwrap(),
            "{f}"
        );
    }
}

#[test]
fn config_file_and_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"n": 50, "trials": 2, "R_grid": [1.0]}"#).unwrap();
    let out = critpair(&["pair", "--config", cfg.to_str().unwrap(), "--trials", "3", "--out", &out_arg(dir.path())]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let trials = std::fs::read_to_string(dir.path().join("trials.csv")).unwrap();
    assert!(trials.lines().next().unwrap().ends_with(",miss_R0"));
    assert_eq!(trials.lines().count(), 4);
}

#[test]
fn invalid_config_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = critpair(&["pair", "--alpha", "0.4", "--out", &out_arg(dir.path())]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("critpair:"));

    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, r#"{"no_such_field": 1}"#).unwrap();
    let out = critpair(&["clt", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));

    let out = critpair(&["conjecture", "--config", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn conjecture_writes_atoms_and_ecdf() {
    let dir = tempfile::tempdir().unwrap();
    let out = critpair(&["conjecture", "--n", "40", "--trials", "2", "--out", &out_arg(dir.path())]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let atoms = std::fs::read_to_string(dir.path().join("atoms.csv")).unwrap();
    assert!(atoms.starts_with("trial,k,kind,re,im,status\n"));
    assert_eq!(atoms.lines().count(), 1 + 2 * 2 * 40);
    let ecdf = std::fs::read_to_string(dir.path().join("ecdf.csv")).unwrap();
    assert!(ecdf.starts_with("x,ecdf,normal_cdf\n"));
}

#[test]
fn cst_check_passes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"mc_batches": 8, "mc_batch_size": 5000}"#).unwrap();
    let out = critpair(&["cst-check", "--config", cfg.to_str().unwrap(), "--out", &out_arg(dir.path())]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    assert!(String::from_utf8_lossy(&out.stdout).contains("overall,pass"));
}

#[test]
fn unknown_subcommand_is_rejected() {
    let out = critpair(&["nonsense"]);
    assert!(!out.status.success());
}
