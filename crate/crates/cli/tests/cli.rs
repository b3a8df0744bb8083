//! End-to-end coverage of the `eszeta` binary: exit codes, report formats,
//! byte determinism, and JSON round-trips.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

use eszeta_cli::wire::{
    Envelope, FZerosResult, RangeParams, RangeResult, SolveParams, SolveResult, ValueResult,
};
use eszeta_core::{DensityReport, ScanReport, SumReport};

fn eszeta(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eszeta"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is utf8")
}

fn stderr_str(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is utf8")
}

fn parse_json(out: &Output) -> Value {
    serde_json::from_str(&stdout_str(out)).expect("stdout is one JSON document")
}

/// Report bytes with the trailing `"elapsed_ms":…}` clause removed — the
/// only part allowed to differ between identical invocations.
fn strip_elapsed(body: &str) -> &str {
    body.split("\"elapsed_ms\":")
        .next()
        .expect("report has an elapsed_ms field")
}

#[test]
fn solve_reports_the_classical_witness() {
    let out = eszeta(&["solve", "--k", "4", "--n", "5"]);
    assert!(out.status.success(), "stderr: {}", stderr_str(&out));
    let v = parse_json(&out);
    assert_eq!(v["command"], "solve");
    assert_eq!(v["params"]["k"], 4);
    assert_eq!(v["params"]["n"], 5);
    assert_eq!(
        v["result"],
        serde_json::json!({"x": 2, "y": 4, "z": 20, "t": 4, "m": 8})
    );
    // the result object preserves the documented field order
    let text = stdout_str(&out);
    assert!(
        text.contains(r#""result":{"x":2,"y":4,"z":20,"t":4,"m":8}"#),
        "unexpected field order in {text}"
    );
}

#[test]
fn solve_json_round_trips() {
    let out = eszeta(&["solve", "--k", "4", "--n", "7"]);
    assert!(out.status.success());
    let body = stdout_str(&out);
    let env: Envelope<SolveParams, SolveResult> = serde_json::from_str(&body).expect("re-parses");
    assert_eq!(env.command, "solve");
    let again = serde_json::to_string(&env).unwrap();
    assert_eq!(body.trim_end(), again, "round trip must preserve every byte");
}

#[test]
fn solve_csv_has_the_documented_header() {
    let out = eszeta(&["solve", "--k", "4", "--n", "5", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout_str(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("k,n,x,y,z,t,m"));
    assert_eq!(lines.next(), Some("4,5,2,4,20,4,8"));
}

#[test]
fn solve_human_format_prints_the_identity() {
    let out = eszeta(&["solve", "--k", "4", "--n", "5", "--format", "human"]);
    assert!(out.status.success());
    assert!(stdout_str(&out).contains("4/5 = 1/2 + 1/4 + 1/20"));
}

#[test]
fn missing_required_flag_is_a_usage_error() {
    let out = eszeta(&["solve", "--k", "4"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn domain_error_names_the_pole() {
    let out = eszeta(&["gk-sum", "--k", "4", "--s", "1", "--N", "10"]);
    assert_eq!(out.status.code(), Some(3));
    let err = stderr_str(&out);
    assert!(err.contains("PoleAtOne"), "stderr: {err}");
    assert!(stdout_str(&out).is_empty(), "no report on domain error");
}

#[test]
fn gk_sum_meets_the_documented_error_bound() {
    let out = eszeta(&["gk-sum", "--k", "4", "--s", "2", "--N", "10000"]);
    assert!(out.status.success());
    let v = parse_json(&out);
    let abs_error = v["result"]["abs_error"].as_f64().unwrap();
    assert!(abs_error < 1e-7, "abs_error = {abs_error}");
    let report: SumReport = serde_json::from_value(v["result"].clone()).expect("SumReport");
    assert_eq!(report.n_terms, 10_000);
}

#[test]
fn verify_range_with_unsolved_entries_exits_4_but_writes_the_report() {
    // 5/2 admits no integer-step witness at any bounds.
    let out = eszeta(&[
        "verify-range",
        "--k",
        "5",
        "--n-start",
        "2",
        "--n-end",
        "4",
        "--x-max",
        "50",
        "--t-span",
        "50",
    ]);
    assert_eq!(out.status.code(), Some(4));
    let v = parse_json(&out);
    assert_eq!(v["result"]["unsolved"], serde_json::json!([2]));
    assert_eq!(v["result"]["solved_count"], 2);
}

#[test]
fn verify_range_solved_exits_0_and_round_trips() {
    let out = eszeta(&["verify-range", "--k", "4", "--n-start", "2", "--n-end", "20"]);
    assert!(out.status.success(), "stderr: {}", stderr_str(&out));
    let body = stdout_str(&out);
    let env: Envelope<RangeParams, RangeResult> = serde_json::from_str(&body).expect("re-parses");
    assert_eq!(env.result.solved_count, 19);
    assert!(env.result.unsolved.is_empty());
    assert_eq!(env.params.x_max, 80, "default x_max is 4·n_end");
    let again = serde_json::to_string(&env).unwrap();
    assert_eq!(body.trim_end(), again);
}

#[test]
fn verify_range_csv_lists_every_denominator() {
    let out = eszeta(&[
        "verify-range",
        "--k",
        "5",
        "--n-start",
        "2",
        "--n-end",
        "6",
        "--x-max",
        "50",
        "--t-span",
        "50",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(4)); // n = 2 and n = 5 stay unsolved
    let text = stdout_str(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,solved,x,y,z,t,m"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 5);
    assert!(rows[0].starts_with("2,false,"));
    assert!(rows[1].starts_with("3,true,"));
    assert!(rows[3].starts_with("5,false,"));
}

#[test]
fn density_round_trips() {
    let out = eszeta(&["density", "--k", "4", "--N", "100"]);
    assert!(out.status.success());
    let v = parse_json(&out);
    let report: DensityReport = serde_json::from_value(v["result"].clone()).expect("DensityReport");
    assert_eq!(report.n_max, 100);
    assert!(report.zero_count > 0);
}

#[test]
fn zeta_accepts_real_and_complex_points() {
    let out = eszeta(&["zeta", "--s", "2"]);
    assert!(out.status.success());
    let v = parse_json(&out);
    let re = v["result"]["value"]["re"].as_f64().unwrap();
    assert!((re - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-12);

    // `--s 2` and `--s 2,0` are the same point
    let explicit = eszeta(&["zeta", "--s", "2,0"]);
    assert_eq!(
        strip_elapsed(&stdout_str(&out)),
        strip_elapsed(&stdout_str(&explicit))
    );

    let bad = eszeta(&["zeta", "--s", "2;0"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn zeta_pole_is_a_domain_error() {
    let out = eszeta(&["zeta", "--s", "1"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr_str(&out).contains("PoleAtOne"));
}

#[test]
fn gk_eval_scales_zeta_and_round_trips() {
    let zeta_out = eszeta(&["zeta", "--s", "3"]);
    let gk_out = eszeta(&["gk-eval", "--k", "4", "--s", "3"]);
    assert!(gk_out.status.success());
    let z: Envelope<Value, ValueResult> =
        serde_json::from_str(&stdout_str(&zeta_out)).expect("re-parses");
    let g: Envelope<Value, ValueResult> =
        serde_json::from_str(&stdout_str(&gk_out)).expect("re-parses");
    assert_eq!(g.result.value, z.result.value * 4.0);
}

#[test]
fn func_eq_residual_is_tiny_off_the_poles() {
    let out = eszeta(&["func-eq", "--k", "4", "--s", "0.5,3"]);
    assert!(out.status.success());
    let v = parse_json(&out);
    assert!(v["result"]["residual"].as_f64().unwrap() < 1e-9);
}

#[test]
fn residue_probe_lands_near_k() {
    let out = eszeta(&["residue", "--k", "4"]);
    assert!(out.status.success());
    let v = parse_json(&out);
    assert_eq!(v["params"]["eps"], 1e-3);
    assert!(v["result"]["abs_error"].as_f64().unwrap() < 3e-3);
}

#[test]
fn scan_zeros_finds_the_first_zero_and_round_trips() {
    let out = eszeta(&["scan-zeros", "--k", "4", "--t-min", "14", "--t-max", "14.3", "--step", "0.05"]);
    assert!(out.status.success(), "stderr: {}", stderr_str(&out));
    let v = parse_json(&out);
    let report: ScanReport = serde_json::from_value(v["result"].clone()).expect("ScanReport");
    assert_eq!(report.brackets.len(), 1);
    assert!((report.brackets[0].refined_t - 14.134725141734694).abs() < 1e-6);
    assert_eq!(serde_json::to_value(&report).unwrap(), v["result"]);
}

#[test]
fn scan_zeros_csv_keeps_warnings_on_stderr() {
    // step 1.0 between the zeros near 21.02 and 25.01 (gap ≈ 3.99 < 4·step)
    // triggers the coarse-grid warning.
    let out = eszeta(&[
        "scan-zeros",
        "--k",
        "4",
        "--t-min",
        "20",
        "--t-max",
        "26",
        "--step",
        "1.0",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = stdout_str(&out);
    assert!(text.starts_with("k,t_lo,t_hi,refined_t,min_abs"));
    assert!(!text.contains("warning"), "warnings belong on stderr");
    assert!(stderr_str(&out).contains("warning"));
}

#[test]
fn f_zeros_reports_the_integer_locus() {
    let out = eszeta(&["f-zeros", "--k", "4", "--x", "1", "--t", "1", "--n", "2"]);
    assert!(out.status.success());
    let body = stdout_str(&out);
    let env: Envelope<Value, FZerosResult> = serde_json::from_str(&body).expect("re-parses");
    assert_eq!(env.result.family.u_roots.0.re, 2.0);
    assert_eq!(env.result.family.u_roots.1.re, 8.0);
    assert_eq!(env.result.family.principal_s.0.re, 1.0);
    assert_eq!(env.result.family.principal_s.1.re, 3.0);
    assert!(env.result.max_residual < 1e-9);
}

#[test]
fn f_zeros_rejects_a_degenerate_quadratic() {
    let out = eszeta(&["f-zeros", "--k", "4", "--x", "1", "--t", "0", "--n", "2"]);
    assert_eq!(out.status.code(), Some(3), "t = 0 never forms a quadratic");
    assert!(stderr_str(&out).contains("DegenerateQuadratic"));
}

#[test]
fn identical_invocations_are_byte_identical_up_to_elapsed() {
    for args in [
        &["solve", "--k", "4", "--n", "97"][..],
        &["zeta", "--s", "0.5,14.1"][..],
        &["verify-range", "--k", "4", "--n-start", "2", "--n-end", "40"][..],
        &["f-zeros", "--k", "4", "--x", "1", "--t", "1", "--n", "3"][..],
    ] {
        let first = stdout_str(&eszeta(args));
        let second = stdout_str(&eszeta(args));
        assert_eq!(
            strip_elapsed(&first),
            strip_elapsed(&second),
            "non-deterministic output for {args:?}"
        );
    }
}

#[test]
fn thread_count_does_not_change_results() {
    let one = Command::new(env!("CARGO_BIN_EXE_eszeta"))
        .args(["verify-range", "--k", "4", "--n-start", "2", "--n-end", "60", "--threads", "1"])
        .output()
        .unwrap();
    let many = Command::new(env!("CARGO_BIN_EXE_eszeta"))
        .args(["verify-range", "--k", "4", "--n-start", "2", "--n-end", "60"])
        .env("ESZETA_THREADS", "3")
        .output()
        .unwrap();
    assert!(one.status.success() && many.status.success());
    assert_eq!(
        strip_elapsed(&stdout_str(&one)),
        strip_elapsed(&stdout_str(&many))
    );
}

#[test]
fn output_flag_writes_the_report_to_a_file() {
    let dir = std::env::temp_dir().join(format!("eszeta-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path: PathBuf = dir.join("solve.json");
    let out = eszeta(&["solve", "--k", "4", "--n", "5", "--output", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout_str(&out).is_empty(), "report goes to the file only");
    let body = std::fs::read_to_string(&path).unwrap();
    assert!(body.contains(r#""result":{"x":2,"y":4,"z":20,"t":4,"m":8}"#));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn config_file_presets_are_used_and_flags_override() {
    let dir = std::env::temp_dir().join(format!("eszeta-cli-cfg-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("preset.conf");
    std::fs::write(&cfg, "# preset for tests\nx_max = 100\nt_span = 50\n").unwrap();

    let preset = eszeta(&["solve", "--k", "4", "--n", "5", "--config", cfg.to_str().unwrap()]);
    let v = parse_json(&preset);
    assert_eq!(v["params"]["x_max"], 100);
    assert_eq!(v["params"]["t_span"], 50);

    let overridden = eszeta(&[
        "solve", "--k", "4", "--n", "5",
        "--config", cfg.to_str().unwrap(),
        "--t-span", "60",
    ]);
    let v = parse_json(&overridden);
    assert_eq!(v["params"]["x_max"], 100, "file still presets x_max");
    assert_eq!(v["params"]["t_span"], 60, "flag overrides the file");

    let unknown = dir.join("bad.conf");
    std::fs::write(&unknown, "x_mox = 100\n").unwrap();
    let bad = eszeta(&["solve", "--k", "4", "--n", "5", "--config", unknown.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(stderr_str(&bad).contains("x_mox"));

    std::fs::remove_dir_all(&dir).unwrap();
}
