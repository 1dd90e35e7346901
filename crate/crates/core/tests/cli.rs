use std::f64::consts::PI;
use std::process::{Command, Output};

use serde_json::Value;

fn kit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_casimir-kit"))
        .args(args)
        .env_remove("CASIMIR_KIT_THREADS")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = kit(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json record")
}

fn csv_values(text: &str) -> Vec<(f64, f64)> {
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("x,"))
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].parse().unwrap(), f[1].parse().unwrap())
        })
        .collect()
}

#[test]
fn alpha_command() {
    let v = json(&["alpha"]);
    assert!((v["value"].as_f64().unwrap() - 1.193).abs() < 1e-3);
    assert_eq!(v["converged"], true);
}

#[test]
fn ideal_force() {
    let v = json(&["force", "--ideal", "--L", "1", "--A", "1"]);
    assert!((v["value"].as_f64().unwrap() - PI * PI / 240.0).abs() < 1e-15);
}

#[test]
fn eta_far_from_plasma_wavelength() {
    let v = json(&["eta", "--L-over-lambdap", "1e9"]);
    assert!((v["eta_f"].as_f64().unwrap() - 1.0).abs() < 1e-4);
    assert!((v["eta_e"].as_f64().unwrap() - 1.0).abs() < 1e-4);
    assert_eq!(v["converged"], true);
}

#[test]
fn eta_sweep_csv() {
    let out = kit(&["sweep", "--quantity", "eta-f", "--min", "0.01", "--max", "100", "--output", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l == "x,value,err_est,converged"));
    let rows = csv_values(&text);
    assert_eq!(rows.len(), 50);
    assert!(rows.windows(2).all(|w| w[1].1 > w[0].1));
    assert!(rows.last().unwrap().1 > 0.95);
}

#[test]
fn plasmon_sweep_saturates() {
    let out = kit(&[
        "sweep", "--quantity", "plasmon-dispersion", "--min", "0.1", "--max", "100", "--count", "20", "--output", "csv",
    ]);
    let rows = csv_values(&String::from_utf8(out.stdout).unwrap());
    let last = rows.last().unwrap().1;
    assert!((last * 2f64.sqrt() - 1.0).abs() < 0.01);
}

#[test]
fn usage_errors() {
    let out = kit(&["sweep", "--quantity", "eta-f", "--min", "0.1", "--max", "1", "--count", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    assert_eq!(kit(&["force", "--L", "-1"]).status.code(), Some(2));
    assert_eq!(kit(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn sweep_is_deterministic_across_thread_counts() {
    let args = ["sweep", "--quantity", "eta-e", "--min", "0.05", "--max", "20", "--count", "16", "--output", "csv"];
    let run = |threads: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_casimir-kit"))
            .args(args)
            .env("CASIMIR_KIT_THREADS", threads)
            .output()
            .unwrap();
        assert!(out.status.success());
        out.stdout
    };
    let one = run("1");
    assert_eq!(one, run("4"));
    assert_eq!(one, run("4"));
}

#[test]
fn json_record_feeds_back_as_config() {
    let dir = tempfile::tempdir().unwrap();
    let first = kit(&["force", "--units", "si", "--L", "150", "--A", "2"]);
    assert!(first.status.success(), "{}", String::from_utf8_lossy(&first.stderr));
    let path = dir.path().join("record.json");
    std::fs::write(&path, &first.stdout).unwrap();
    let second = kit(&["force", "--config", path.to_str().unwrap()]);
    assert!(second.status.success(), "{}", String::from_utf8_lossy(&second.stderr));
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("eta.csv");
    let out = kit(&["eta", "--L-over-lambdap", "1", "--output", "csv", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("5.23844784210"), "{text}");
}
