//! End-to-end tests for the `parkdist` binary: exit codes, output formats,
//! reproducibility, and resource-cap handling.

use std::process::{Command, Output};

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_parkdist"));
    // Isolate from any ambient cap override.
    cmd.env_remove("PARKDIST_ORACLE_CAP");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

#[test]
fn unknown_subcommand_is_usage_error() {
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_required_flag_is_usage_error() {
    let out = run(&["pmf", "last-j", "--n", "5"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("--positions"), "stderr was: {err}");
}

#[test]
fn last_car_csv_table() {
    let out = run(&["pmf", "last-car", "--n", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "k,probability,decimal");
    assert_eq!(lines.len(), 5);
    assert!(lines[4].starts_with("4,64/125,0.512"), "row was: {}", lines[4]);
}

#[test]
fn perm_json_table_sums_to_one() {
    let out = run(&["pmf", "perm", "--n", "3", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(doc["schema"], 1);
    assert_eq!(doc["command"], "pmf-perm");
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 6);
    let total: f64 = rows.iter().map(|r| r["decimal"].as_f64().unwrap()).sum();
    assert!((total - 1.0).abs() < 1e-12);
    let identity = rows
        .iter()
        .find(|r| r["permutation"] == "1 2 3")
        .expect("identity row present");
    assert_eq!(identity["probability"], "3/8", "1*2*3/16 in lowest terms");
}

#[test]
fn enumerate_parking_only_lists_all_parking_functions() {
    let out = run(&["enumerate", "--n", "3", "--parking-only"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "prefs,parks,permutation");
    assert_eq!(lines.len(), 17, "16 parking functions of size 3 plus header");
    assert!(lines[1..].iter().all(|l| l.contains(",true,")));
}

#[test]
fn enumerate_respects_cap_env() {
    let out = bin()
        .env("PARKDIST_ORACLE_CAP", "3")
        .args(["enumerate", "--n", "4"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("cap"), "stderr was: {err}");

    let out = bin()
        .env("PARKDIST_ORACLE_CAP", "4")
        .args(["enumerate", "--n", "4"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_of(&out).lines().count(), 257, "4^4 rows plus header");
}

#[test]
fn experiment_passes_and_reports_schema() {
    let args = [
        "experiment",
        "first-car",
        "--n",
        "60",
        "--samples",
        "20000",
        "--seed",
        "7",
        "--format",
        "json",
    ];
    let out = run(&args);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(doc["schema"], 1);
    assert_eq!(doc["experiment"], "first-car");
    assert_eq!(doc["n"], 60);
    assert_eq!(doc["j"], serde_json::Value::Null);
    assert_eq!(doc["samples"], 20000);
    assert_eq!(doc["seed"], 7);
    assert_eq!(doc["pass"], true);
    for section in ["estimates", "comparators", "tolerances"] {
        assert!(doc[section].is_object(), "missing section {section}");
    }
    assert!(doc["wall_time_ms"].is_u64());

    // Same invocation, same results.
    let again: serde_json::Value = serde_json::from_str(&stdout_of(&run(&args))).unwrap();
    assert_eq!(strip_volatile(doc), strip_volatile(again));
}

#[test]
fn experiment_results_do_not_depend_on_thread_count() {
    let base = [
        "experiment", "borel", "--n", "300", "--samples", "5000", "--seed", "11", "--format",
        "json",
    ];
    let mut one = base.to_vec();
    one.extend(["--threads", "1"]);
    let mut two = base.to_vec();
    two.extend(["--threads", "2"]);
    let a: serde_json::Value = serde_json::from_str(&stdout_of(&run(&one))).unwrap();
    let b: serde_json::Value = serde_json::from_str(&stdout_of(&run(&two))).unwrap();
    assert_eq!(strip_volatile(a), strip_volatile(b));
}

fn strip_volatile(mut doc: serde_json::Value) -> serde_json::Value {
    let obj = doc.as_object_mut().unwrap();
    obj.remove("threads");
    obj.remove("wall_time_ms");
    doc
}

#[test]
fn failing_experiment_exits_one_with_report() {
    let out = run(&[
        "experiment", "wlln", "--n", "2000", "--samples", "500", "--seed", "3", "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(doc["pass"], false);
    // The sample mean tracks the exact finite-n mean, not the band center.
    let mean = doc["estimates"]["mean"].as_f64().unwrap();
    let exact = doc["comparators"]["mean_exact"].as_f64().unwrap();
    assert!((mean - exact).abs() < 0.01);
}

#[test]
fn passing_monte_carlo_experiment_exits_zero() {
    let out = run(&[
        "experiment", "borel", "--n", "500", "--samples", "20000", "--seed", "5", "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(doc["pass"], true);
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join("parkdist-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("last_car.csv");
    let _ = std::fs::remove_file(&path);
    let out = run(&["pmf", "last-car", "--n", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_of(&out).is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("k,probability,decimal\n"));
    assert_eq!(text.lines().count(), 4);
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn sample_is_reproducible_and_prefix_stable() {
    let a = stdout_of(&run(&["sample", "--n", "12", "--samples", "6", "--seed", "42"]));
    let b = stdout_of(&run(&["sample", "--n", "12", "--samples", "6", "--seed", "42"]));
    assert_eq!(a, b);
    // Drawing fewer samples yields a prefix of the same table.
    let c = stdout_of(&run(&["sample", "--n", "12", "--samples", "3", "--seed", "42"]));
    assert!(a.starts_with(&c));
    let d = stdout_of(&run(&["sample", "--n", "12", "--samples", "6", "--seed", "43"]));
    assert_ne!(a, d);
}

#[test]
fn verify_battery_passes() {
    let out = run(&["verify", "--n", "4", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(doc["schema"], 1);
    assert_eq!(doc["pass"], true);
    let rows = doc["rows"].as_array().unwrap();
    assert!(rows.len() >= 20);
    assert!(rows.iter().all(|r| r["pass"] == true));
}

#[test]
fn borel_rejects_exact_mode() {
    let out = run(&["pmf", "borel", "--mode", "exact"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn float_mode_drops_rational_column() {
    let out = run(&["pmf", "last-car", "--n", "4", "--mode", "float"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.starts_with("k,decimal\n"));
    assert!(!text.contains('/'));
}

#[test]
fn experiment_csv_flattens_report() {
    let out = run(&[
        "experiment", "first-car", "--n", "40", "--samples", "5000", "--seed", "2", "--format",
        "csv",
    ]);
    let text = stdout_of(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "key,value");
    assert!(lines.iter().any(|l| l.starts_with("experiment,first-car")));
    assert!(lines.iter().any(|l| l.starts_with("estimates.")));
    assert!(lines.iter().any(|l| l.starts_with("comparators.")));
    assert!(lines.iter().any(|l| l.starts_with("tolerances.")));
    assert!(lines.iter().any(|l| l.starts_with("pass,")));
}
