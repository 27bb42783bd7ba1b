//! End-to-end runs of the zal binary. Heavy paths get a small --m-cap so the
//! whole file stays fast in debug builds.

use std::path::Path;
use std::process::{Command, Output};

fn zal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zal"))
        .args(args)
        .output()
        .expect("spawn zal")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn rows(out: &Output) -> Vec<Vec<String>> {
    stdout(out)
        .lines()
        .skip(1)
        .map(|line| line.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn eval_single_point_reports_two_methods() {
    let out = zal(&[
        "--command",
        "eval",
        "--n",
        "0",
        "--sigma",
        "0.5",
        "--t",
        "100",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("n,sigma,t,sn_primary,err_primary,sn_check,abs_diff"));
    let row = &rows(&out)[0];
    let primary: f64 = row[3].parse().unwrap();
    let diff: f64 = row[6].parse().unwrap();
    assert!((primary - -0.0024099).abs() < 1e-6);
    assert!(diff < 1e-8, "methods disagree by {diff}");
}

#[test]
fn eval_at_origin_shows_the_constant_term() {
    let out = zal(&[
        "--command",
        "eval",
        "--n",
        "2",
        "--sigma",
        "0.5",
        "--t",
        "0",
    ]);
    assert!(out.status.success());
    let row = &rows(&out)[0];
    assert_eq!(row[3], "0.0");
    assert_eq!(row[7], "0.125");
}

#[test]
fn eval_rejects_sigma_outside_the_strip() {
    let out = zal(&[
        "--command",
        "eval",
        "--n",
        "0",
        "--sigma",
        "1.2",
        "--t",
        "50",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_command_is_a_usage_error() {
    let out = zal(&["--n", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn eval_range_is_deterministic_across_runs() {
    let args = [
        "--command",
        "eval",
        "--n",
        "1",
        "--sigma",
        "0.6",
        "--t-lo",
        "20",
        "--t-hi",
        "24",
        "--step",
        "2",
        "--threads",
        "1",
    ];
    let first = zal(&args);
    let second = zal(&args);
    assert!(first.status.success());
    assert_eq!(stdout(&first), stdout(&second));
    assert_eq!(rows(&first).len(), 3);
}

#[test]
fn config_file_fills_gaps_but_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.cfg");
    std::fs::write(&path, "sigma=0.6\nn=2\n# trailing comment\n").unwrap();
    let out = zal(&[
        "--command",
        "eval",
        "--t",
        "30",
        "--sigma",
        "0.55",
        "--config",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let row = &rows(&out)[0];
    assert_eq!(row[0], "2", "n comes from the file");
    assert_eq!(row[1], "0.55", "sigma flag overrides the file");
    let delta: f64 = row[7].parse().unwrap();
    assert!((delta - 0.10125).abs() < 1e-12);
}

#[test]
fn malformed_config_line_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.cfg");
    std::fs::write(&path, "sigma 0.6\n").unwrap();
    let out = zal(&[
        "--command",
        "eval",
        "--t",
        "30",
        "--config",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

fn assert_cache_roundtrip(cache: &Path, extra_env: Option<(&str, &Path)>) {
    let base = [
        "--command",
        "eval",
        "--n",
        "1",
        "--sigma",
        "0.5",
        "--t",
        "30",
    ];
    let run = |with_flag: bool| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_zal"));
        cmd.args(base);
        if with_flag {
            cmd.args(["--cache", cache.to_str().unwrap()]);
        }
        if let Some((key, value)) = extra_env {
            cmd.env(key, value);
        }
        cmd.output().expect("spawn zal")
    };
    let first = run(extra_env.is_none());
    assert!(first.status.success());
    let written = std::fs::read_to_string(cache).unwrap();
    assert!(written.starts_with("kind,n,sigma,t,prec,re,im,err\n"));
    assert!(written.lines().any(|l| l.starts_with("sn,1,0.5,30.0,")));
    let second = run(extra_env.is_none());
    assert!(second.status.success());
    assert_eq!(
        stdout(&first),
        stdout(&second),
        "cache hit must reproduce bytes"
    );
}

#[test]
fn cache_file_round_trips_through_the_flag() {
    let dir = tempfile::tempdir().unwrap();
    assert_cache_roundtrip(&dir.path().join("vals.csv"), None);
}

#[test]
fn cache_path_can_come_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("env.csv");
    assert_cache_roundtrip(&cache, Some(("ZAL_CACHE", &cache)));
}

#[test]
fn corrupt_cache_rows_are_skipped_with_a_warning() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("vals.csv");
    std::fs::write(
        &cache,
        "kind,n,sigma,t,prec,re,im,err\nsn,not-a-number,0.5\n",
    )
    .unwrap();
    let out = zal(&[
        "--command",
        "eval",
        "--n",
        "1",
        "--sigma",
        "0.5",
        "--t",
        "30",
        "--cache",
        cache.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let err = String::from_utf8(out.stderr.clone()).unwrap();
    assert!(err.contains("malformed"), "stderr: {err}");
}

#[test]
fn resonator_toy_case_lists_its_primes() {
    let out = zal(&["--command", "resonator", "--T", "1e16"]);
    assert!(out.status.success());
    let summary: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(
        summary["primes"],
        serde_json::json!([149, 151, 157, 163, 167])
    );
    assert_eq!(summary["member_count"], 32);
    assert_eq!(summary["checks"]["sum_r2_le_4_sum_f2"], true);
    assert_eq!(summary["checks"]["r_bounded_by_r0"], true);
}

#[test]
fn resonator_below_the_feasible_range_exits_3() {
    let out = zal(&["--command", "resonator", "--T", "100"]);
    assert_eq!(out.status.code(), Some(3));
    let out = zal(&["--command", "resonator", "--T", "1e16", "--beta", "0.99"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn resonator_huge_case_falls_back_to_sampling() {
    let out = zal(&["--command", "resonator", "--T", "1e300", "--seed", "7"]);
    assert!(out.status.success());
    let summary: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(summary["sampled"]["sum_f2_est"].as_f64().unwrap() > 0.0);
    assert_eq!(summary["sampled"]["seed"], 7);
}

#[test]
fn verify_convolution_skips_the_origin() {
    let out = zal(&["--command", "verify-convolution", "--t", "0"]);
    assert!(out.status.success());
    let row = &rows(&out)[0];
    assert!(row.last().unwrap().contains("skipped"), "row: {row:?}");
}

#[test]
fn verify_convolution_rejects_unknown_grids() {
    let out = zal(&["--command", "verify-convolution", "--grid", "none"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_convolution_single_row_passes() {
    let out = zal(&[
        "--command",
        "verify-convolution",
        "--n",
        "1",
        "--t",
        "30",
        "--m-cap",
        "1000000",
    ]);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let row = &rows(&out)[0];
    assert_eq!(row.last().unwrap(), "pass");
    let residual: f64 = row[6].parse().unwrap();
    let band: f64 = row[7].parse().unwrap();
    assert!(residual <= band);
}

#[test]
fn scan_returns_requested_rows_sorted_by_r2() {
    let out = zal(&[
        "--command",
        "scan",
        "--n",
        "1",
        "--T",
        "1e16",
        "--t-lo",
        "20",
        "--t-hi",
        "40",
        "--step",
        "0.5",
        "--top-q",
        "5",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("t,sigma,n,R2,Sn"));
    let rows = rows(&out);
    assert_eq!(rows.len(), 5);
    let r2: Vec<f64> = rows.iter().map(|r| r[3].parse().unwrap()).collect();
    assert!(r2.windows(2).all(|w| w[0] >= w[1]), "not sorted: {r2:?}");
}

#[test]
fn moments_reports_the_normalized_ratio() {
    let out = zal(&[
        "--command",
        "moments",
        "--n",
        "0",
        "--sigma",
        "0.5",
        "--t",
        "100",
    ]);
    assert!(out.status.success());
    let summary: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let value = summary["value"].as_f64().unwrap();
    let ratio = summary["ratio"].as_f64().unwrap();
    assert!(value > 0.0);
    assert!((ratio - value / (100.0 * 100f64.ln())).abs() < 1e-15);
    assert_eq!(summary["bounded"], true);
}

#[test]
fn bounds_table_needs_the_constant_domain() {
    let out = zal(&[
        "--command",
        "bounds-table",
        "--n",
        "1",
        "--sigma",
        "0.6",
        "--t-lo",
        "10",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = zal(&[
        "--command",
        "bounds-table",
        "--n",
        "1",
        "--sigma",
        "0.6",
        "--t-lo",
        "20",
        "--t-hi",
        "60",
        "--step",
        "20",
    ]);
    assert!(out.status.success());
    let rows = rows(&out);
    assert_eq!(rows.len(), 3);
    let c_plus: f64 = rows[0][3].parse().unwrap();
    assert!(c_plus > 0.0 && c_plus < 1.0);
}

#[test]
fn output_lands_in_the_requested_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rows.csv");
    let out = zal(&[
        "--command",
        "eval",
        "--n",
        "0",
        "--sigma",
        "0.5",
        "--t",
        "50",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("n,sigma,t,"));
    assert_eq!(text.lines().count(), 2);
}
