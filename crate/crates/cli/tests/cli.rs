use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn pwlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pwlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn list_names_every_experiment() {
    let out = pwlab(&["list"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    for name in ["convergence", "divergence", "walsh", "lti", "phase", "frame-check"] {
        assert!(text.contains(name), "missing {name} in: {text}");
    }
}

#[test]
fn frame_check_exit_codes() {
    let ok = pwlab(&["frame-check", "--k", "2"]);
    assert_eq!(ok.status.code(), Some(0), "{:?}", ok);
    let bad = pwlab(&["frame-check", "--k", "5"]);
    assert_eq!(bad.status.code(), Some(3));
}

#[test]
fn missing_config_is_a_config_error() {
    let out = pwlab(&["run", "/nonexistent/config.json"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn malformed_config_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    fs::write(&cfg, "{ not json").unwrap();
    let out = pwlab(&["run", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let cfg2 = dir.path().join("unknown.json");
    fs::write(&cfg2, r#"{"experiment":"nope","output_dir":"x"}"#).unwrap();
    let out2 = pwlab(&["run", cfg2.to_str().unwrap()]);
    assert_eq!(out2.status.code(), Some(3));
}

fn run_walsh(dir: &Path, out_dir: &Path) {
    let cfg = dir.join("walsh.json");
    fs::write(
        &cfg,
        format!(
            r#"{{"experiment":"walsh","params":{{"max_n":32}},"seed":1,"output_dir":{:?}}}"#,
            out_dir.to_str().unwrap()
        ),
    )
    .unwrap();
    let out = pwlab(&["run", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn walsh_run_is_deterministic_and_dyadic_exact() {
    let dir = tempfile::tempdir().unwrap();
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    run_walsh(dir.path(), &out_a);
    run_walsh(dir.path(), &out_b);
    for name in ["walsh.csv", "summary.json", "plot.gp"] {
        let a = fs::read(out_a.join(name)).unwrap();
        let b = fs::read(out_b.join(name)).unwrap();
        assert_eq!(a, b, "{name} differs between identical runs");
    }
    // Dyadic rows are exactly 1.
    let csv = fs::read_to_string(out_a.join("walsh.csv")).unwrap();
    for line in csv.lines().skip(1) {
        let mut it = line.split(',');
        let n: usize = it.next().unwrap().parse().unwrap();
        let v: f64 = it.next().unwrap().parse().unwrap();
        if n.is_power_of_two() {
            assert_eq!(v, 1.0, "N = {n}");
        }
    }
    // Manifest checksums refer to the files actually written.
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_a.join("manifest.json")).unwrap()).unwrap();
    assert!(manifest["outputs"]["walsh.csv"].is_string());
    assert_eq!(manifest["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn failed_property_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("out");
    let cfg = dir.path().join("lti.json");
    // An unattainable tolerance turns the lti experiment into a failing
    // property check; outputs are still written.
    fs::write(
        &cfg,
        format!(
            r#"{{"experiment":"lti","params":{{"n_trunc":8,"degree":4,"tol":1e-30}},"seed":3,"output_dir":{:?}}}"#,
            out_dir.to_str().unwrap()
        ),
    )
    .unwrap();
    let out = pwlab(&["run", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert!(out_dir.join("lti.csv").exists());
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["pass"], false);
}

#[test]
fn thread_cap_is_respected() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("out");
    run_walsh_with_threads(dir.path(), &out_dir);
}

fn run_walsh_with_threads(dir: &Path, out_dir: &Path) {
    let cfg = dir.join("walsh.json");
    fs::write(
        &cfg,
        format!(
            r#"{{"experiment":"walsh","params":{{"max_n":16}},"seed":1,"output_dir":{:?}}}"#,
            out_dir.to_str().unwrap()
        ),
    )
    .unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_pwlab"))
        .args(["run", cfg.to_str().unwrap()])
        .env("PWLAB_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}
