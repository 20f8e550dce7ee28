use std::fs;
use std::process::Command;

fn lab() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cokernel-lab"))
}

#[test]
fn formulas_eval_prints_json() {
    let out = lab()
        .args(["formulas", "eval", "--kind", "symmetric", "--H", r#"{"p":2,"lambda":[]}"#])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["value"].as_f64().unwrap() - 0.419422).abs() < 1e-6);
    assert!(v["tail_bound"].as_f64().unwrap() < 1e-12);

    let out = lab().args(["formulas", "eval", "--kind", "graph", "--H", r#"{"p":2,"lambda":[1]}"#, "--moment"]).output().unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["moment"], "1");

    let out = lab().args(["formulas", "eval", "--kind", "bogus"]).output().unwrap();
    assert!(!out.status.success());
}

#[test]
fn run_writes_identical_reports_for_any_worker_count() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("cfg.json");
    fs::write(
        &config,
        r#"{"kind":"cok-dist","model":"general","n":[40],"p":2,"d":2,"c":1.5,"trials":300,"master_seed":1}"#,
    )
    .unwrap();
    let mut reports = Vec::new();
    for workers in ["1", "4"] {
        let out = dir.path().join(format!("w{workers}"));
        let status = lab()
            .args(["cok-dist", "--config", config.to_str().unwrap(), "--workers", workers, "--seed", "9", "--out"])
            .arg(&out)
            .status()
            .unwrap();
        assert!(status.success());
        let json = fs::read_to_string(out.join("report.json")).unwrap();
        let csv = fs::read_to_string(out.join("rows.csv")).unwrap();
        assert!(csv.starts_with("n,statistic,trials"));
        reports.push((json, csv));
    }
    assert_eq!(reports[0], reports[1]);
    let v: serde_json::Value = serde_json::from_str(&reports[0].0).unwrap();
    assert_eq!(v["config"]["master_seed"], 9);
}

#[test]
fn wrong_kind_and_bad_config_are_errors() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("cfg.json");
    fs::write(&config, r#"{"kind":"moment","n":[10],"trials":5,"c":1.5}"#).unwrap();
    let out = lab().args(["cok-dist", "--config", config.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    fs::write(&config, r#"{"kind":"cok-dist","n":[10],"trials":0,"c":1.5}"#).unwrap();
    let out = lab().args(["cok-dist", "--config", config.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_exit_status_follows_the_battery() {
    let dir = tempfile::tempdir().unwrap();
    let status = lab().args(["verify", "--out"]).arg(dir.path()).status().unwrap();
    assert!(status.success());
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(v["passed"], true);

    let config = dir.path().join("bad.json");
    fs::write(
        &config,
        r#"{"kind":"verify","verify":{"aut_max_order":4,"aut_overrides":[{"p":2,"parts":[2],"order":3}]}}"#,
    )
    .unwrap();
    let out = dir.path().join("bad");
    let result = lab().args(["verify", "--config", config.to_str().unwrap(), "--out"]).arg(&out).output().unwrap();
    assert_eq!(result.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&result.stdout).contains("FAIL aut-order"));
}
