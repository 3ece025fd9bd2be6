use std::fs;
use std::process::Command;

use jcm_cli::{find, run_scenario, ScenarioConfig};

fn small(name: &str) -> ScenarioConfig {
    let mut cfg = find(name).unwrap().config;
    cfg.steps = 300;
    cfg
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small("fig1b");
    let a = run_scenario(&cfg, &dir.path().join("a")).unwrap();
    let b = run_scenario(&cfg, &dir.path().join("b")).unwrap();
    assert_eq!(fs::read(&a.data_path).unwrap(), fs::read(&b.data_path).unwrap());
    assert_eq!(fs::read(a.plot_path.unwrap()).unwrap(), fs::read(b.plot_path.unwrap()).unwrap());
}

#[test]
fn data_file_layout_and_norm_column() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = small("fig2a");
    cfg.steps = 60;
    let report = run_scenario(&cfg, dir.path()).unwrap();
    let text = fs::read_to_string(&report.data_path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("gt,S,W_pp,norm"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 60);
    for r in &rows {
        assert_eq!(r.len(), 4);
        assert!((r[3] - 1.0).abs() <= 1e-9);
        assert!((-1e-9..=0.75 + 1e-9).contains(&r[1]));
    }
    assert_eq!(rows[0][0], 0.0);
    assert!((rows[59][0] - cfg.tmax).abs() < 1e-11);
}

#[test]
fn manifest_echoes_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small("fig1a");
    let report = run_scenario(&cfg, dir.path()).unwrap();
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&report.manifest_path).unwrap()).unwrap();
    assert_eq!(v["config"]["state"], "A");
    assert_eq!(v["config"]["nbar"], 30.0);
    assert_eq!(v["library_version"], jcm_core::VERSION);
    assert_eq!(v["cutoffs"].as_array().unwrap().len(), 1);
    assert!(v["truncation_mass"].as_f64().unwrap() >= 1.0 - 1e-6);
    assert!(v["wall_clock_seconds"].as_f64().unwrap() >= 0.0);
    assert_eq!(v["data_file"], "fig1a.csv");
}

#[test]
fn plot_offset_only_in_script() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = small("fig1b");
    cfg.plot_offset = 0.25;
    let report = run_scenario(&cfg, dir.path()).unwrap();
    let script = fs::read_to_string(report.plot_path.unwrap()).unwrap();
    assert!(script.contains("offset = 0.25"));
    // W_pp starts at exactly 1 for |+,+>, unshifted in the data file
    let first = fs::read_to_string(&report.data_path).unwrap().lines().nth(1).unwrap().to_string();
    assert_eq!(first.split(',').nth(2), Some("1"));
}

#[test]
fn unwritable_output_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    assert!(run_scenario(&small("fig1a"), &blocker.join("sub")).is_err());
}

#[test]
fn binary_runs_config_file_with_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("mine.toml");
    fs::write(&cfg_path, "model = \"one-mode\"\nstate = \"B\"\nnbar = 4.0\ntmax = 3.0\nsteps = 50\n").unwrap();
    let out = dir.path().join("out");
    let status = Command::new(env!("CARGO_BIN_EXE_jcm"))
        .args(["run", cfg_path.to_str().unwrap(), "--steps", "40", "--engine", "closed-form", "--no-plot"])
        .env("JCM_OUT_DIR", &out)
        .output()
        .unwrap();
    assert!(status.status.success());
    let text = fs::read_to_string(out.join("mine.csv")).unwrap();
    assert_eq!(text.lines().count(), 41);
    assert!(!out.join("mine_plot.py").exists());
    let manifest = fs::read_to_string(out.join("mine.manifest.json")).unwrap();
    assert!(manifest.contains("\"engine\": \"closed-form\""));
}

#[test]
fn binary_custom_state_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bin = env!("CARGO_BIN_EXE_jcm");
    let ok = Command::new(bin)
        .args(["run", "fig1a", "--alpha", "1", "--delta", "-1", "--nbar", "2", "--steps", "20", "--name", "cust"])
        .args(["--out", dir.path().to_str().unwrap()])
        .output()
        .unwrap();
    assert!(ok.status.success(), "{}", String::from_utf8_lossy(&ok.stderr));
    let manifest = fs::read_to_string(dir.path().join("cust.manifest.json")).unwrap();
    assert!(manifest.contains("\"state\": \"custom\""));

    let bad = Command::new(bin).args(["run", "fig1a", "--state", "zzz"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("zzz"));
}

#[test]
fn binary_list_predict_verify() {
    let bin = env!("CARGO_BIN_EXE_jcm");
    let list = String::from_utf8(Command::new(bin).arg("list").output().unwrap().stdout).unwrap();
    for name in ["fig1a", "fig1b", "fig2a", "fig2b", "fig3a", "fig3b"] {
        assert!(list.contains(name));
    }
    let p = Command::new(bin).args(["predict", "fig2b", "--tmax", "5"]).output().unwrap();
    let text = String::from_utf8(p.stdout).unwrap();
    assert!(text.contains("t4") && text.contains("1.5707963268") && text.contains("4.7123889804"));
    let v = Command::new(bin).args(["verify", "--states", "3", "--times", "3"]).output().unwrap();
    assert!(v.status.success());
    assert_eq!(String::from_utf8(v.stdout).unwrap().lines().filter(|l| l.trim_start().starts_with("ok")).count(), 4);
}
