use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn maximin(out: &Path, manifest: &str, args: &[&str]) -> Output {
    // p3 in the full manifest only has room for two seeds.
    let kmax = if manifest == "manifest.json" { "2" } else { "3" };
    Command::new(env!("CARGO_BIN_EXE_maximin"))
        .args(args)
        .arg("--manifest")
        .arg(fixtures().join(manifest))
        .arg("--out")
        .arg(out)
        .args(["--rounds", "200", "--calibration-rounds", "200", "--runs", "3", "--kmax", kmax, "--timing-reps", "1"])
        .args(["--regime", "low,high", "--seed", "7"])
        .env("RUST_LOG", "off")
        .output()
        .expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn ok_or_partial(o: &Output) {
    assert!(matches!(o.status.code(), Some(0) | Some(3)), "exit {:?}: {}", o.status.code(), stderr(o));
}

#[test]
fn calibration_is_cached() {
    let dir = tempfile::tempdir().unwrap();
    let first = maximin(dir.path(), "bench_manifest.json", &["calibrate"]);
    assert_eq!(first.status.code(), Some(0), "{}", stderr(&first));
    let table = std::fs::read(dir.path().join("calibration.csv")).unwrap();
    let second = maximin(dir.path(), "bench_manifest.json", &["calibrate"]);
    assert!(stderr(&second).contains("cache hits: 5, curves simulated: 0"), "{}", stderr(&second));
    assert_eq!(std::fs::read(dir.path().join("calibration.csv")).unwrap(), table);
}

#[test]
fn seed_prints_labels() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_maximin"))
        .args(["seed", "--algorithm", "gonzalez", "--alpha", "0.5", "--k", "1", "--init", "0", "--network"])
        .arg(fixtures().join("p5.txt"))
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["seeds"], serde_json::json!([4]));
    assert_eq!(v["initial_seed"], serde_json::json!(0));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad_alg = Command::new(env!("CARGO_BIN_EXE_maximin"))
        .args(["seed", "--algorithm", "nope", "--alpha", "0.5", "--k", "1", "--network", "x"])
        .output()
        .unwrap();
    assert_eq!(bad_alg.status.code(), Some(1));
    assert!(stderr(&bad_alg).contains("min_degree_ndn"));

    let missing = maximin(dir.path(), "bench_manifest.json", &["report"]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(stderr(&missing).contains("results.csv"));

    let zero_runs = Command::new(env!("CARGO_BIN_EXE_maximin")).args(["calibrate", "--runs", "0"]).output().unwrap();
    assert_eq!(zero_runs.status.code(), Some(1));
}

#[test]
fn bench_resumes_to_identical_results() {
    let dir = tempfile::tempdir().unwrap();
    ok_or_partial(&maximin(dir.path(), "bench_manifest.json", &["calibrate"]));
    ok_or_partial(&maximin(dir.path(), "bench_manifest.json", &["bench"]));
    let path = dir.path().join("results.csv");
    let full = std::fs::read_to_string(&path).unwrap();

    // Keep roughly the first half and leave a torn final line behind.
    let cut = full.len() / 2;
    std::fs::write(&path, &full[..cut]).unwrap();
    let resumed = maximin(dir.path(), "bench_manifest.json", &["bench"]);
    ok_or_partial(&resumed);
    assert!(!stderr(&resumed).contains(" 0 resumed"), "{}", stderr(&resumed));
    assert_eq!(std::fs::read_to_string(&path).unwrap(), full);
}

#[test]
fn full_pipeline_with_meta_learner() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path();
    for step in [&["calibrate"][..], &["bench"], &["report"]] {
        ok_or_partial(&maximin(out, "manifest.json", step));
    }
    for f in ["aggregate.csv", "category_matrix.csv", "best_per_network.csv", "best_counts.csv", "timing.csv"] {
        assert!(out.join(f).exists(), "{f} missing");
    }

    let select = maximin(out, "manifest.json", &["meta", "select"]);
    assert_eq!(select.status.code(), Some(0), "{}", stderr(&select));
    let sets: serde_json::Value = serde_json::from_slice(&select.stdout).unwrap();
    for set in sets.as_array().unwrap() {
        let members = set["members"].as_array().unwrap();
        assert_eq!(members.len(), 5);
        assert!(!members.iter().any(|m| m == "myopic" || m == "naive_myopic"));
    }

    let train = maximin(out, "manifest.json", &["meta", "train"]);
    assert_eq!(train.status.code(), Some(0), "{}", stderr(&train));
    assert!(out.join("model_low.json").exists());

    let predict = Command::new(env!("CARGO_BIN_EXE_maximin"))
        .args(["meta", "predict", "--model"])
        .arg(out.join("model_high.json"))
        .arg("--network")
        .arg(fixtures().join("kite.txt"))
        .output()
        .unwrap();
    assert_eq!(predict.status.code(), Some(0), "{}", stderr(&predict));
    let v: serde_json::Value = serde_json::from_slice(&predict.stdout).unwrap();
    assert!(v["algorithm"].is_string());

    for args in [&["meta", "report"][..], &["meta", "report", "--oracle"]] {
        let o = maximin(out, "manifest.json", args);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    let report = std::fs::read_to_string(out.join("meta_report_high.csv")).unwrap();
    assert!(report.starts_with("network,selected_alg,beta_selected,beta_myopic,perf_diff_pct"));
}
