//! End-to-end checks of the tvx binary: output payloads, exit codes, and
//! thread-count independence of the verification suites.

use std::process::{Command, Output};

fn tvx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tvx"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn tvx_with_threads(threads: &str, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tvx"))
        .env("TVX_THREADS", threads)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn factorize_emits_the_pentagon_wall() {
    let out = tvx(&["factorize", "--l1", "1", "--l2", "1", "--order", "4"]);
    let doc = stdout_json(&out);
    let walls = doc["walls"].as_array().expect("walls array");
    assert_eq!(walls.len(), 3);
    let dirs: Vec<(u64, u64)> = walls
        .iter()
        .map(|w| (w["a"].as_u64().unwrap(), w["b"].as_u64().unwrap()))
        .collect();
    assert_eq!(dirs, vec![(0, 1), (1, 1), (1, 0)]);
    let terms = walls[1]["f"]["terms"].as_array().expect("terms array");
    assert_eq!(terms.len(), 2);
    assert_eq!(terms[1]["exponents"], serde_json::json!([1, 1]));
    assert_eq!(terms[1]["coeff"], "1");
}

#[test]
fn euler_prints_the_kronecker_value() {
    let out = tvx(&["euler", "--kronecker", "3", "--dim", "3,5"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "68");
}

#[test]
fn unknown_flags_are_usage_errors() {
    let out = tvx(&["euler", "--nope"]);
    assert_eq!(out.status.code(), Some(2));
    let out = tvx(&["verify", "--suite", "nosuchsuite"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn fixture_comparison_passes() {
    for name in ["finite-1-1", "finite-1-2", "finite-1-3", "central-2-2"] {
        let out = tvx(&["factorize", "--fixture", name]);
        assert!(out.status.success(), "fixture {name}");
        assert!(String::from_utf8_lossy(&out.stdout).contains("ok"));
    }
}

#[test]
fn verify_smalllength_passes_and_ignores_thread_count() {
    let first = tvx_with_threads("1", &["verify", "--suite", "smalllength"]);
    let second = tvx_with_threads("7", &["verify", "--suite", "smalllength"]);
    assert!(first.status.success());
    assert!(second.status.success());
    assert_eq!(first.stdout, second.stdout);
    assert!(String::from_utf8_lossy(&first.stdout).contains("5/5 ok"));
}

#[test]
fn bps_reports_integer_values() {
    let out = tvx(&["bps", "--l1", "2", "--l2", "3", "--format", "json"]);
    let doc = stdout_json(&out);
    assert_eq!(doc["bps"], serde_json::json!(["6", "6", "6", "12", "30", "78"]));
    assert_eq!(doc["integral"], serde_json::json!(true));
    assert_eq!(doc["nonnegative"], serde_json::json!(true));
}

#[test]
fn trees_agree_with_the_formula() {
    let out = tvx(&["trees", "--l1", "3", "--l2", "3", "--d", "2", "--format", "json"]);
    let doc = stdout_json(&out);
    assert_eq!(doc["formula"], "9");
    assert_eq!(doc["enumeration"], "9");
    assert_eq!(doc["agree"], serde_json::json!(true));
    assert_eq!(doc["formula_verified"], serde_json::json!(true));
}

#[test]
fn chi_routes_agree_at_level_one() {
    let recursion = stdout_json(&tvx(&[
        "chi", "--l1", "2", "--l2", "2", "--a", "1", "--b", "1", "--order", "6",
    ]));
    let extraction = stdout_json(&tvx(&[
        "chi", "--l1", "2", "--l2", "2", "--a", "1", "--b", "1", "--order", "6",
        "--from-factorization",
    ]));
    assert_eq!(recursion["aggregated"][0]["chi"], "4");
    assert_eq!(extraction["aggregated"][0]["chi"], "4");
}
