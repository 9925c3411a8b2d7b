//! End-to-end tests of the command-line binary: envelope shapes, exit codes,
//! determinism, and the sets→evaluate→vn round trip.

use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cantorq"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf-8 output")
}

fn json_of(args: &[&str]) -> Value {
    serde_json::from_str(&stdout_of(args)).expect("valid JSON")
}

#[test]
fn moments_text_and_json() {
    let text = stdout_of(&["moments"]);
    assert!(text.contains("2/3"));
    assert!(text.contains("16/153"));

    let value = json_of(&["moments", "--format", "json"]);
    assert_eq!(value["command"], "moments");
    assert_eq!(value["results"]["variance"]["num"], "16");
    assert_eq!(value["results"]["variance"]["den"], "153");
    assert_eq!(value["results"]["second_moment"]["den"], "51");
    assert_eq!(value["exact"], true);
}

#[test]
fn moments_csv_is_one_row() {
    let csv = stdout_of(&["moments", "--format", "csv"]);
    let lines: Vec<&str> = csv.trim_end().lines().collect();
    assert_eq!(lines.len(), 2, "header plus a single data row");
    assert!(lines[0].starts_with("mean,mean_approx,variance"));
    assert!(lines[1].starts_with("2/3,"));
    assert!(lines[1].contains("16/153"));
    assert!(lines[1].contains("28/51"));
}

#[test]
fn vn_range_lists_known_values() {
    let csv = stdout_of(&["vn", "--range", "9..13", "--format", "csv"]);
    for expect in [
        "9,9805/40108032,",
        "10,7969/40108032,",
        "11,6133/40108032,",
        "12,4297/40108032,",
        "13,3481/40108032,",
    ] {
        assert!(csv.contains(expect), "missing {expect} in {csv}");
    }
    let text = stdout_of(&["vn", "--n", "1"]);
    assert!(text.contains("V_1 = 16/153"));
}

#[test]
fn count_range_and_single() {
    let csv = stdout_of(&["count", "--range", "5..12", "--format", "csv"]);
    assert!(csv.contains("10,3"));
    assert!(csv.contains("12,1"));
    let text = stdout_of(&["count", "--n", "70"]);
    assert_eq!(text.trim_end(), "card(C_70) = 6435");
}

#[test]
fn sets_enumerates_when_feasible() {
    let value = json_of(&["sets", "--n", "10", "--enumerate-limit", "10", "--format", "json"]);
    assert_eq!(value["results"]["count"], "3");
    assert_eq!(value["results"]["sets"].as_array().unwrap().len(), 3);

    let capped = json_of(&["sets", "--n", "70", "--enumerate-limit", "10", "--format", "json"]);
    assert_eq!(capped["results"]["count"], "6435");
    assert!(capped["results"]["sets"].is_null());
}

#[test]
fn genealogy_dot_is_deterministic_and_complete() {
    let first = stdout_of(&["genealogy", "--from", "9", "--to", "12", "--format", "dot"]);
    let second = stdout_of(&["genealogy", "--from", "9", "--to", "12", "--format", "dot"]);
    assert_eq!(first, second, "DOT output must be byte-identical across runs");
    assert_eq!(first.matches(" -> ").count(), 12);
    for needle in [
        "n9_1 -> n10_1;",
        "n10_1 -> n11_1;",
        "n10_1 -> n11_2;",
        "n10_2 -> n11_1;",
        "n10_2 -> n11_3;",
        "n10_3 -> n11_2;",
        "n10_3 -> n11_3;",
        "n11_3 -> n12_1;",
    ] {
        assert!(first.contains(needle), "missing edge {needle}");
    }
}

#[test]
fn json_output_is_deterministic() {
    let a = stdout_of(&["sets", "--n", "11", "--format", "json"]);
    let b = stdout_of(&["sets", "--n", "11", "--format", "json"]);
    assert_eq!(a, b);
}

#[test]
fn evaluate_reads_codebook_file() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    write!(file, "[\"1/6\", \"5/6\"]").unwrap();
    let path = file.path().to_str().unwrap().to_owned();
    let value = json_of(&["evaluate", "--codebook", &path, "--format", "json"]);
    assert_eq!(value["results"]["lower"]["num"], "13");
    assert_eq!(value["results"]["lower"]["den"], "612");
    assert_eq!(value["results"]["exact_value"], true);
}

#[test]
fn sets_json_feeds_evaluate_and_reproduces_vn() {
    for n in 1..=13u64 {
        let n = n.to_string();
        let n = n.as_str();
        let sets = json_of(&["sets", "--n", n, "--format", "json"]);
        let codebook = sets["results"]["canonical"]["codebook"].clone();
        let mut file = tempfile::NamedTempFile::new().unwrap();
        write!(file, "{}", serde_json::to_string(&codebook).unwrap()).unwrap();
        let path = file.path().to_str().unwrap().to_owned();

        let eval = json_of(&["evaluate", "--codebook", &path, "--format", "json"]);
        let vn = json_of(&["vn", "--n", n, "--format", "json"]);
        let expect_num = vn["results"]["values"][0]["error"]["num"].as_str().unwrap();
        let expect_den = vn["results"]["values"][0]["error"]["den"].as_str().unwrap();
        // The engine codebooks resolve exactly: both bounds equal V_n.
        assert_eq!(eval["results"]["lower"]["num"].as_str().unwrap(), expect_num);
        assert_eq!(eval["results"]["lower"]["den"].as_str().unwrap(), expect_den);
        assert_eq!(eval["results"]["upper"]["num"].as_str().unwrap(), expect_num);
        assert_eq!(eval["results"]["exact_value"], true);
    }
}

#[test]
fn oracle_passes_and_reports() {
    let value = json_of(&["oracle", "--n", "3", "--depth", "8", "--format", "json"]);
    assert_eq!(value["results"]["status"], "PASS");
    assert_eq!(value["results"]["bracket_ok"], true);
    assert_eq!(value["results"]["structure"]["kind"], "match");
    assert_eq!(value["results"]["engine_error"]["num"], "55");
    assert_eq!(value["results"]["engine_error"]["den"], "9792");
}

#[test]
fn oracle_fast_mode_flags_inexact() {
    let value = json_of(&[
        "oracle", "--n", "2", "--depth", "6", "--mode", "fast", "--format", "json",
    ]);
    assert_eq!(value["exact"], false);
    assert_eq!(value["results"]["status"], "PASS");
}

#[test]
fn oracle_heuristic_mode_is_labeled() {
    let value = json_of(&[
        "oracle", "--n", "4", "--depth", "6", "--p1", "1/2", "--r1", "1/3", "--r2", "1/3",
        "--format", "json",
    ]);
    assert_eq!(value["results"]["label"], "HEURISTIC");
    assert_eq!(value["exact"], false);
}

#[test]
fn input_errors_exit_2() {
    for args in [
        vec!["vn", "--range", "13..9"],
        vec!["vn"],
        vec!["count", "--n", "0"],
        vec!["oracle", "--n", "9", "--depth", "3"],
        vec!["evaluate", "--codebook", "/nonexistent/file.json"],
        vec!["moments", "--format", "dot"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "args {args:?}");
    }
    // Unknown flags are argument-parse failures (clap exits 2 as well).
    let out = run(&["vn", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn resource_limits_exit_4() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    write!(file, "[\"17/100\", \"5/6\"]").unwrap();
    let path = file.path().to_str().unwrap().to_owned();
    let out = run(&["evaluate", "--codebook", &path, "--budget", "2"]);
    assert_eq!(out.status.code(), Some(4));

    let out = run(&["genealogy", "--from", "9", "--to", "12", "--enumerate-limit", "2"]);
    assert_eq!(out.status.code(), Some(4));
}
