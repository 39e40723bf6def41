use std::path::Path;
use std::process::Command;

use mhd2d::dynamics::read_checkpoint;
use mhd2d::harness::read_diagnostics;

fn mhd2d(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_mhd2d")).args(args).output().expect("binary runs")
}

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).unwrap();
}

#[test]
fn run_then_resume() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    write(&cfg, "alpha = 0.5\nbeta = 1\nnu = 0.1\neta = 0.1\nn = 32\ndt = 0.01\nt_end = 0.1\noutput_every = 5\n");
    let out = dir.path().join("run");
    let o = mhd2d(&["run", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["diagnostics.csv", "checkpoint.bin", "manifest.json", "regime_report.json"] {
        assert!(out.join(f).exists(), "{f}");
    }
    let manifest: serde_json::Value = serde_json::from_slice(&std::fs::read(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["status"], "completed");
    assert_eq!(manifest["files"]["diagnostics"], "diagnostics.csv");
    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(out.join("regime_report.json")).unwrap()).unwrap();
    assert_eq!(report["regime"], "theorem-5.1");

    let resumed = dir.path().join("resumed");
    let o = mhd2d(&[
        "resume",
        "--checkpoint",
        out.join("checkpoint.bin").to_str().unwrap(),
        "--t-end",
        "0.2",
        "--out",
        resumed.to_str().unwrap(),
        "--config",
        cfg.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let records = read_diagnostics(&resumed.join("diagnostics.csv")).unwrap();
    assert!((records[0].t - 0.1).abs() < 1e-15);
    assert!((records.last().unwrap().t - 0.2).abs() < 1e-15);
    assert!((read_checkpoint(&resumed.join("checkpoint.bin")).unwrap().state.t - 0.2).abs() < 1e-15);
}

#[test]
fn zero_end_time_gives_one_row() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    write(&cfg, "alpha = 0\nbeta = 1.6\nnu = 0\neta = 1\nn = 16\nt_end = 0\n");
    let o = mhd2d(&["run", "--config", cfg.to_str().unwrap(), "--out", dir.path().join("o").to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(read_diagnostics(&dir.path().join("o/diagnostics.csv")).unwrap().len(), 1);
}

#[test]
fn bad_config_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    write(&cfg, "alpha = 0\nbeta = -1\nnu = 0\neta = 1\n");
    let o = mhd2d(&["run", "--config", cfg.to_str().unwrap(), "--out", dir.path().join("o").to_str().unwrap()]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn sweep_writes_summary() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("sweep.cfg");
    write(&spec, "alphas = 0\nbetas = 1.3, 1.6\nnu = 0\neta = 1\nn = 16\ndt = 0.01\nt_end = 0.05\n");
    let out = dir.path().join("sweep");
    let o = mhd2d(&["sweep", "--spec", spec.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let mut reader = csv::Reader::from_path(out.join("summary.csv")).unwrap();
    let regimes: Vec<String> = reader.records().map(|r| r.unwrap()[2].to_string()).collect();
    assert_eq!(regimes, ["outside", "theorem-1.1"]);
}

#[test]
fn lp_check_passes_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&a, &b] {
        let o = mhd2d(&["check", "--suite", "lp", "--seed", "3", "--out", out.to_str().unwrap()]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
    }
    let ra = std::fs::read(a.join("check_report.json")).unwrap();
    assert_eq!(ra, std::fs::read(b.join("check_report.json")).unwrap());
    let report: serde_json::Value = serde_json::from_slice(&ra).unwrap();
    assert_eq!(report["passed"], true);
}

#[test]
fn dynamics_check_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = mhd2d(&["check", "--suite", "dynamics", "--seed", "0", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.contains("PASS dynamics/formulation-equivalence"));
    assert!(text.contains("PASS dynamics/energy-budget"));
}

#[test]
fn unknown_suite_is_rejected() {
    let o = mhd2d(&["check", "--suite", "everything", "--out", "/nonexistent"]);
    assert!(!o.status.success());
}
