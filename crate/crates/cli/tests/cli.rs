//! End-to-end tests of the `multsum` binary: config parsing, exit codes,
//! output formats, and run-to-run determinism.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_multsum"))
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    bin()
        .arg("--out")
        .arg(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("reading {name}: {e}"))
}

fn csv_without_seconds(text: &str) -> String {
    text.lines()
        .map(|line| {
            let mut cols: Vec<&str> = line.split(',').collect();
            cols.pop();
            cols.join(",")
        })
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn sum_divisor_function_small_grid() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "sum",
            "--json",
            r#"{"f": "tau_rho", "rho": "2", "grid": [10, 100]}"#,
        ],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = read(dir.path(), "sum.csv");
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "x,re_exact,im_exact,re_expansion,im_expansion,re_remainder,im_remainder,seconds"
    );
    let row10: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row10[0], "10");
    assert_eq!(row10[1].parse::<f64>().unwrap(), 27.0);
    let row100: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row100[1].parse::<f64>().unwrap(), 482.0);
}

#[test]
fn sum_constant_function() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["sum", "--json", r#"{"f": "one", "grid": [5]}"#]);
    assert!(out.status.success());
    let csv = read(dir.path(), "sum.csv");
    let row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[0], "5");
    assert_eq!(row[1].parse::<f64>().unwrap(), 5.0);
}

#[test]
fn malformed_rho_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "sum",
            "--json",
            r#"{"f": "tau_rho", "rho": "2+", "grid": [10]}"#,
        ],
    );
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("rho"), "stderr must name the field: {err}");
}

#[test]
fn unknown_config_key_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "sum",
            "--json",
            r#"{"f": "one", "grid": [5], "surprise": 1}"#,
        ],
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("surprise"));
}

#[test]
fn deterministic_output_across_runs_and_workers() {
    let d1 = tempfile::tempdir().unwrap();
    let d2 = tempfile::tempdir().unwrap();
    let cfg = r#"{"f": "g0", "A": 0.5, "grid": {"from": 1000, "to": 100000, "points": 6}}"#;
    let out1 = run_in(d1.path(), &["sum", "--json", cfg]);
    assert!(out1.status.success());
    let out2 = bin()
        .arg("--out")
        .arg(d2.path())
        .args(["--workers", "2", "sum", "--json", cfg])
        .output()
        .unwrap();
    assert!(out2.status.success());
    let c1 = csv_without_seconds(&read(d1.path(), "sum.csv"));
    let c2 = csv_without_seconds(&read(d2.path(), "sum.csv"));
    assert_eq!(c1, c2, "CSV must be byte-identical apart from timing");
}

#[test]
fn expand_divisor_function_both_routes() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "expand",
            "--json",
            r#"{"f": "tau_rho", "rho": "2", "J": 1, "route": "both"}"#,
        ],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_str(&read(dir.path(), "expand.json")).unwrap();
    let lambda = report["report"]["lambda"].as_array().unwrap();
    let l0 = lambda[0][0].as_f64().unwrap();
    let l1 = lambda[1][0].as_f64().unwrap();
    assert!((l0 - 1.0).abs() < 1e-10);
    assert!((l1 - 0.15443132980306572).abs() < 1e-10);
    let diff = report["route_difference"].as_f64().unwrap();
    assert!(diff < 1e-5, "route difference {diff}");
}

#[test]
fn expand_nonpositive_integer_rho_notes_zero_lambdas() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "expand",
            "--json",
            r#"{"f": "tau_rho", "rho": "-2", "J": 3, "route": "series"}"#,
        ],
    );
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&read(dir.path(), "expand.json")).unwrap();
    for pair in report["report"]["lambda"].as_array().unwrap() {
        assert_eq!(pair[0].as_f64().unwrap(), 0.0);
        assert_eq!(pair[1].as_f64().unwrap(), 0.0);
    }
    assert!(report["note"].as_str().unwrap().contains("vanishes"));
}

#[test]
fn expand_divergent_function_carries_trace() {
    let dir = tempfile::tempdir().unwrap();
    // g(p) = p^{0.3} has divergent weighted prime sums.
    let out = run_in(
        dir.path(),
        &[
            "expand",
            "--json",
            r#"{"f": {"op": "exp_multiplicative", "prime_values": {"form": "inv_prime_pow", "exponent": -0.3}}, "rho": "0", "route": "series"}"#,
        ],
    );
    assert_eq!(out.status.code(), Some(4), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_str(&read(dir.path(), "expand.json")).unwrap();
    assert!(report["divergence_warning"].as_str().is_some());
    assert!(!report["trace"].as_array().unwrap().is_empty());
}

#[test]
fn experiment_rejects_bad_g0_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "experiment",
            "--json",
            r#"{"experiment": "counterexample-5.1", "A": 0.9, "r": 0.8}"#,
        ],
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("A < r < 1"));
}

#[test]
fn experiment_resonance_passes_and_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "experiment",
            "--json",
            r#"{"experiment": "counterexample-5.2", "A": 0.2, "r": 0.9, "C": 1.5, "x_max": 100000}"#,
        ],
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let verdict: serde_json::Value =
        serde_json::from_str(&read(dir.path(), "counterexample-5_2.json")).unwrap();
    assert_eq!(verdict["passed"], serde_json::Value::Bool(true));
    assert!(verdict["checks"].as_array().unwrap().len() >= 3);
    let csv = read(dir.path(), "counterexample-5_2.csv");
    assert!(csv.starts_with("h,s_h"));
}

#[test]
fn experiment_synthetic_decay_fit_seeded() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .arg("--out")
        .arg(dir.path())
        .args([
            "--seed",
            "12345",
            "experiment",
            "--json",
            r#"{"experiment": "decay-fit-synthetic"}"#,
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let verdict: serde_json::Value =
        serde_json::from_str(&read(dir.path(), "decay-fit-synthetic.json")).unwrap();
    assert_eq!(verdict["params"]["seed"].as_u64(), Some(12345));
}

#[test]
fn experiment_unknown_id_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &["experiment", "--json", r#"{"experiment": "mystery"}"#],
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn friable_trace_multiplicative_mode() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &["friable", "--json", r#"{"tau": 1.0, "y": 1024}"#],
    );
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&read(dir.path(), "friable.json")).unwrap();
    assert!(report["distance"].as_f64().unwrap().is_finite());
    let csv = read(dir.path(), "friable.csv");
    assert!(csv.lines().count() > 5);
}

#[test]
fn hypothesis_residuals_run() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "hypothesis",
            "--json",
            r#"{"f": "one", "rho": "1", "A": 1.0, "r": 1.0, "grid": [1000, 10000]}"#,
        ],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = read(dir.path(), "hypothesis.csv");
    assert_eq!(csv.lines().count(), 3);
    // f(p) = rho: the full-sum residual is identically zero.
    let row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[1].parse::<f64>().unwrap(), 0.0);
}

#[test]
fn compare_writes_rows_and_fit() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "compare",
            "--json",
            r#"{"f": "tau_rho", "rho": "2", "A": 1.0, "grid": [10000, 100000, 1000000]}"#,
        ],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = read(dir.path(), "compare.csv");
    assert_eq!(csv.lines().count(), 4);
    // exact = expansion + remainder on every row
    for line in csv.lines().skip(1) {
        let c: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
        assert_eq!(c[1], c[3] + c[5], "row identity at x = {}", c[0]);
    }
    let report: serde_json::Value = serde_json::from_str(&read(dir.path(), "compare.json")).unwrap();
    assert!(report["lambda"].as_array().unwrap().len() >= 1);
}

#[test]
fn experiment_reruns_are_identical() {
    let d1 = tempfile::tempdir().unwrap();
    let d2 = tempfile::tempdir().unwrap();
    let cfg = r#"{"experiment": "counterexample-5.2", "A": 0.2, "r": 0.9, "C": 1.5, "x_max": 50000}"#;
    for d in [&d1, &d2] {
        let out = run_in(d.path(), &["experiment", "--json", cfg]);
        assert_eq!(out.status.code(), Some(0));
    }
    assert_eq!(
        read(d1.path(), "counterexample-5_2.csv"),
        read(d2.path(), "counterexample-5_2.csv")
    );
    let strip_meta = |text: &str| -> serde_json::Value {
        let mut v: serde_json::Value = serde_json::from_str(text).unwrap();
        v.as_object_mut().unwrap().remove("meta");
        v
    };
    assert_eq!(
        strip_meta(&read(d1.path(), "counterexample-5_2.json")),
        strip_meta(&read(d2.path(), "counterexample-5_2.json"))
    );
}

#[test]
fn selftest_quick_passes() {
    let out = bin().args(["selftest", "--quick"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let table = String::from_utf8_lossy(&out.stdout);
    assert!(table.contains("stieltjes-table"));
    assert!(table.contains("degeneracy"));
    assert!(table.contains("PASS"));
}

#[test]
fn help_enumerates_catalog_and_experiments() {
    let out = bin().arg("--help").output().unwrap();
    let text = String::from_utf8_lossy(&out.stdout);
    for name in ["g0(A)", "g0_twisted", "resonance", "tau_rho", "unit", "one", "moebius"] {
        assert!(text.contains(name), "help must list {name}");
    }
    for id in [
        "dirichlet-divisor",
        "nonneg-ratio",
        "counterexample-5.1",
        "counterexample-5.2",
        "friable-zeta",
        "decay-fit-synthetic",
    ] {
        assert!(text.contains(id), "help must list {id}");
    }
}
