//! End-to-end tests of the command-line interface: exit codes, report
//! formats, and model-file handling.

use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symfilt"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

fn write_temp(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("symfilt-test-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn validate_builtin_passes() {
    let out = run(&["validate", "kt4"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("d^2 = 0"));
}

#[test]
fn validate_degenerate_model_fails_with_exit_1() {
    let path = write_temp(
        "degenerate.json",
        r#"{ "name": "degenerate", "dim": 4,
             "d": { "4": [ { "coeff": "1", "indices": [2, 3] } ] },
             "omega": [ { "coeff": "1", "indices": [3, 4] } ] }"#,
    );
    let out = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("FAIL"));
    std::fs::remove_file(path).ok();
}

#[test]
fn malformed_model_file_exits_2_with_context() {
    let path = write_temp(
        "broken.json",
        r#"{ "name": "broken", "dim": 4,
             "d": { "4": [ { "coeff": "1", "indices": [2, 2] } ] },
             "omega": [ { "coeff": "1", "indices": [1, 2] } ] }"#,
    );
    let out = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("strictly increasing"), "got: {err}");
    std::fs::remove_file(path).ok();
}

#[test]
fn unknown_model_exits_2() {
    let out = run(&["validate", "no-such-model"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("unknown model"));
}

#[test]
fn unknown_flag_exits_2_with_usage() {
    let out = run(&["cohomology", "kt4", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).to_lowercase().contains("usage"));
}

#[test]
fn cohomology_table_reproduces_dimensions() {
    let out = run(&["cohomology", "kt4", "--complex", "filtered", "--p", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for (degree, dim) in [(0, 1), (1, 3), (2, 4), (3, 4), (4, 3), (5, 1)] {
        assert!(
            text.lines().any(|l| {
                let mut cols = l.split_whitespace();
                cols.next() == Some(&degree.to_string())
                    && cols.next() == Some(&dim.to_string())
            }),
            "missing degree {degree} dim {dim} in:\n{text}"
        );
    }
}

#[test]
fn verify_all_on_kt4_exits_0() {
    let out = run(&["verify", "kt4", "--suite", "all", "--p", "0"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("stasheff"));
    assert!(stdout(&out).contains("gysin"));
}

#[test]
fn verify_rejects_out_of_range_p() {
    let out = run(&["verify", "kt4", "--suite", "sdr", "--p", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("out of range"));
}

#[test]
fn json_and_table_reports_agree_numerically() {
    let table = run(&["cohomology", "t4", "--complex", "cone", "--p", "0"]);
    let json = run(&[
        "cohomology",
        "t4",
        "--complex",
        "cone",
        "--p",
        "0",
        "--format",
        "json",
    ]);
    assert_eq!(table.status.code(), Some(0));
    assert_eq!(json.status.code(), Some(0));
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    let rows = parsed["tables"][0]["rows"].as_array().unwrap();
    let dims: Vec<String> = rows
        .iter()
        .map(|r| r[1].as_str().unwrap().to_string())
        .collect();
    assert_eq!(dims, ["1", "4", "5", "5", "4", "1"]);
    // every dimension cell appears in the table rendering as well
    let table_text = stdout(&table);
    for row in rows {
        let degree = row[0].as_str().unwrap();
        let dim = row[1].as_str().unwrap();
        assert!(
            table_text.lines().any(|l| {
                let mut cols = l.split_whitespace();
                cols.next() == Some(degree) && cols.next() == Some(dim)
            }),
            "row {degree}/{dim} missing from table output"
        );
    }
}

#[test]
fn verify_json_records_seed_when_sampling() {
    let out = run(&[
        "verify", "t6", "--suite", "stasheff", "--p", "0", "--budget", "1000", "--samples",
        "500", "--seed", "99", "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(parsed["seed"], serde_json::json!(99));
}

#[test]
fn pairing_reports_nondegeneracy() {
    let out = run(&["pairing", "kt4", "--p", "0", "--degree", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("rank 4"));

    let out = run(&["pairing", "kt4", "--p", "0", "--degree", "9"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn potential_evaluates_element_files() {
    let element = write_temp(
        "element.json",
        r#"{ "terms": [
             { "coeff": "1", "side": "plain",
               "form": [ { "coeff": "1", "indices": [1] } ] },
             { "coeff": "1", "side": "plain",
               "form": [ { "coeff": "1", "indices": [1, 4] } ] } ] }"#,
    );
    let out = run(&[
        "potential",
        "kt4",
        "--p",
        "0",
        "--element",
        element.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("action potential"));
    std::fs::remove_file(element).ok();
}

#[test]
fn potential_rejects_non_filtered_input() {
    // omega itself is not 0-filtered
    let element = write_temp(
        "badelement.json",
        r#"{ "terms": [
             { "coeff": "1", "side": "plain",
               "form": [ { "coeff": "1", "indices": [1, 2] },
                          { "coeff": "1", "indices": [3, 4] } ] } ] }"#,
    );
    let out = run(&[
        "potential",
        "kt4",
        "--p",
        "0",
        "--element",
        element.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("not 0-filtered"));
    std::fs::remove_file(element).ok();
}

#[test]
fn model_file_parses_and_verifies() {
    // a model given only through the file interface: kt4's presentation
    let path = write_temp(
        "kt4clone.json",
        r#"{ "name": "kt4clone", "dim": 4,
             "d": { "4": [ { "coeff": "1", "indices": [2, 3] } ] },
             "omega": [ { "coeff": "1", "indices": [1, 2] },
                        { "coeff": "1", "indices": [3, 4] } ] }"#,
    );
    let out = run(&[
        "verify",
        path.to_str().unwrap(),
        "--suite",
        "sdr",
        "--p",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    std::fs::remove_file(path).ok();
}
