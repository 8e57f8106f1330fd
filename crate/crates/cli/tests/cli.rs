use std::path::Path;
use std::process::{Command, Output};

fn fracou(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fracou"))
        .args(args)
        .current_dir(dir)
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn rows(path: &Path) -> Vec<Vec<String>> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn help_exits_zero_everywhere() {
    let dir = tempfile::tempdir().unwrap();
    for sub in [&[][..], &["eval"], &["mixing"], &["simulate"], &["diagnose"]] {
        let mut args = sub.to_vec();
        args.push("--help");
        assert_eq!(code(&fracou(&args, dir.path())), 0, "{args:?}");
    }
}

#[test]
fn unknown_flags_exit_two_with_a_diagnostic() {
    let dir = tempfile::tempdir().unwrap();
    let o = fracou(&["eval", "ml", "--rho", "1", "--xmax", "1", "--frobnicate"], dir.path());
    assert_eq!(code(&o), 2);
    assert!(!o.stderr.is_empty());
}

#[test]
fn invalid_parameters_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&fracou(&["eval", "ml", "--rho", "2.5", "--xmax", "1"], dir.path())), 2);
    assert_eq!(code(&fracou(&["mixing", "sample", "--mu", "-1", "--seed", "1"], dir.path())), 2);
    // sampling without a seed
    assert_eq!(code(&fracou(&["mixing", "sample", "--mu", "1"], dir.path())), 2);
    assert_eq!(code(&fracou(&["simulate", "--process", "limit", "--rho", "1", "--mu", "4"], dir.path())), 2);
    assert_eq!(
        code(&fracou(&["simulate", "--process", "limit", "--rho", "0.6", "--mu", "4", "--seed", "1"], dir.path())),
        2
    );
}

#[test]
fn unreachable_truncation_exits_four() {
    let dir = tempfile::tempdir().unwrap();
    let o = fracou(
        &["simulate", "--process", "stationary", "--rho", "1.9", "--mu", "0.4", "--steps", "10", "--seed", "1"],
        dir.path(),
    );
    assert_eq!(code(&o), 4);
}

#[test]
fn exponential_order_tabulates_the_exponential() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&fracou(&["eval", "ml", "--rho", "1", "--xmax", "5", "--out", "e.csv"], dir.path())), 0);
    for r in rows(&dir.path().join("e.csv")) {
        let (x, v): (f64, f64) = (r[0].parse().unwrap(), r[1].parse().unwrap());
        assert!((v - (-x).exp()).abs() <= 1e-12);
    }
    let side: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("e.json")).unwrap()).unwrap();
    assert_eq!(side["config"]["command"], "eval");
    assert_eq!(side["config"]["rho"], 1.0);
}

#[test]
fn limit_paths_start_at_zero_and_replay_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "simulate", "--process", "limit", "--rho", "1", "--mu", "4", "--lambda", "1", "--T", "2", "--steps", "2000",
        "--paths", "100", "--seed", "7", "--out", "y.csv",
    ];
    assert_eq!(code(&fracou(&args, dir.path())), 0);
    let r = rows(&dir.path().join("y.csv"));
    assert_eq!(r.len(), 2001);
    assert_eq!(r[0].len(), 101);
    assert!(r[0][1..].iter().all(|v| v == "0"));
    assert_eq!(code(&fracou(&["--replay", "y.json", "--out", "z.csv"], dir.path())), 0);
    assert_eq!(
        std::fs::read(dir.path().join("y.csv")).unwrap(),
        std::fs::read(dir.path().join("z.csv")).unwrap()
    );
}

#[test]
fn stationary_sidecar_records_the_truncation() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "simulate", "--process", "stationary", "--rho", "1.9", "--mu", "4", "--T", "0.5", "--steps", "100",
        "--paths", "2", "--seed", "3", "--tol", "1e-4", "--out", "eta.csv",
    ];
    assert_eq!(code(&fracou(&args, dir.path())), 0);
    let side: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("eta.json")).unwrap()).unwrap();
    let plan = &side["provenance"]["truncation"];
    assert!(plan["tail_bound"].as_f64().unwrap() < 1e-4);
    assert!(plan["horizon"].as_f64().unwrap() > 0.0);
}

#[test]
fn diagnose_writes_report_and_config() {
    let dir = tempfile::tempdir().unwrap();
    let o = fracou(&["diagnose", "remark", "--rho", "1.9", "--mu", "3", "--out", "r.json"], dir.path());
    assert_eq!(code(&o), 0);
    let r: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    assert_eq!(r["verdict"], "pass");
    assert!(dir.path().join("r.config.json").exists());
}

#[test]
fn diagnose_cauchy_and_stationarity_examples() {
    let dir = tempfile::tempdir().unwrap();
    let o = fracou(&["diagnose", "cauchy", "--rho", "1.9", "--mu", "0.4", "--lambda", "1", "--mc", "0", "--out", "c.json"], dir.path());
    assert_eq!(code(&o), 0);
    let r: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("c.json")).unwrap()).unwrap();
    assert!((r["summary"]["slope"].as_f64().unwrap() + 0.52).abs() < 0.1);

    let o = fracou(
        &["diagnose", "stationarity", "--rho", "1", "--mu", "4", "--lambda", "1", "--mc", "2000", "--out", "s.json"],
        dir.path(),
    );
    assert_eq!(code(&o), 0);
    let r: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("s.json")).unwrap()).unwrap();
    assert!((r["summary"]["sigma2"].as_f64().unwrap() - 1.0 / 7.0).abs() < 1e-4);
}
