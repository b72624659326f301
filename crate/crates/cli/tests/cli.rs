//! End-to-end tests of the `matrixpoints` binary: reference outputs,
//! exit codes, and byte-determinism of the file formats.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_matrixpoints"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn workdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("matrixpoints-cli-{}-{tag}", std::process::id()));
    if dir.exists() {
        fs::remove_dir_all(&dir).expect("stale dir removable");
    }
    fs::create_dir_all(&dir).expect("temp dir");
    dir
}

#[test]
fn count_examples_match_references() {
    let out = run(&[
        "count", "elliptic", "--curve", "0,0,0,1,0", "--p", "3", "--n", "2", "--method",
        "supersingular",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "99\n");

    let out = run(&[
        "count", "elliptic", "--curve", "0,0,0,1,0", "--p", "3", "--n", "2", "--method", "formula",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "99\n");

    let out = run(&[
        "count", "elliptic", "--curve", "0,0,0,1,0", "--p", "3", "--n", "2", "--method", "oracle",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "99\n");

    let out = run(&["count", "k3", "--lambda", "1/1", "--p", "5", "--n", "1", "--method", "oracle"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "12\n");

    let out = run(&["count", "k3", "--lambda", "1", "--p", "7", "--n", "1", "--method", "formula"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "7/3\nverdict: rational-non-integer\n");
}

#[test]
fn trace_and_powers() {
    let out = run(&["trace", "--curve", "0,0,0,1,0", "--p", "5"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "2\n");

    let out = run(&["trace", "--curve", "0,0,0,1,0", "--p", "5", "--powers", "3"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "2\n-6\n-22\n");
}

#[test]
fn exit_codes_follow_the_contract() {
    // Domain errors: exit 1.
    assert_eq!(run(&["trace", "--curve", "0,0,0,1,0", "--p", "9"]).status.code(), Some(1));
    assert_eq!(
        run(&["count", "k3", "--lambda", "0", "--p", "5", "--n", "1", "--method", "formula"])
            .status
            .code(),
        Some(1)
    );
    // lambda = 2 makes p = 3 divide lambda + 1: a bad prime.
    assert_eq!(
        run(&["count", "k3", "--lambda", "2", "--p", "3", "--n", "1", "--method", "formula"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        run(&[
            "count", "elliptic", "--curve", "0,0,0,1,0", "--p", "97", "--n", "2", "--method",
            "oracle", "--budget", "1000",
        ])
        .status
        .code(),
        Some(1)
    );
    // y^2 = x^3 + 3 has discriminant -2^4 3^5: singular mod 3.
    assert_eq!(
        run(&["trace", "--curve", "0,0,0,0,3", "--p", "3"]).status.code(),
        Some(1)
    );

    // Usage errors: exit 2.
    assert_eq!(
        run(&["count", "k3", "--lambda", "abc", "--p", "5", "--n", "1", "--method", "formula"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["count", "k3", "--lambda", "1", "--p", "5", "--n", "1", "--method", "nope"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["count", "elliptic", "--p", "3"]).status.code(), Some(2));
    assert_eq!(
        run(&[
            "count", "elliptic", "--curve", "0,0,0,1,0", "--p", "3", "--n", "0", "--method",
            "formula",
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        run(&[
            "count", "elliptic", "--curve", "0,0,0,1,0", "--p", "3", "--n", "2", "--method",
            "oracle", "--dump-terms", "/tmp/never-written.csv",
        ])
        .status
        .code(),
        Some(2)
    );

    // A passing suite exits 0.
    let out = run(&["verify", "--suite", "densities"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn supersingular_method_warns_on_ordinary_input() {
    // p = 5 is ordinary for y^2 = x^3 + x (a = 2): the closed form still
    // evaluates but a warning lands on stderr.
    let out = run(&[
        "count", "elliptic", "--curve", "0,0,0,1,0", "--p", "5", "--n", "1", "--method",
        "supersingular",
    ]);
    assert!(out.status.success());
    let err = String::from_utf8(out.stderr.clone()).expect("utf8 stderr");
    assert!(err.contains("warning"), "stderr: {err}");
}

#[test]
fn dump_terms_writes_expected_row_counts() {
    let dir = workdir("terms");
    let triple = dir.join("triple.csv");
    let out = run(&[
        "count", "elliptic", "--curve", "0,0,0,1,0", "--p", "5", "--n", "3", "--method", "formula",
        "--dump-terms", triple.to_str().expect("utf8 path"),
    ]);
    assert!(out.status.success());
    let text = fs::read_to_string(&triple).expect("term file");
    // Header plus one row per (r, s, u) with r + s + u = 3: C(5, 2) = 10.
    assert_eq!(text.lines().count(), 11, "{text}");
    assert!(text.starts_with("r,s,u,sign,p_exponent,denominator,alpha_exponent,value\n"));

    let tuple = dir.join("tuple.csv");
    let out = run(&[
        "count", "k3", "--lambda", "1", "--p", "5", "--n", "2", "--method", "formula",
        "--dump-terms", tuple.to_str().expect("utf8 path"),
    ]);
    assert!(out.status.success());
    let text = fs::read_to_string(&tuple).expect("term file");
    // r = 0: 1 tuple; r = 1: 6; r = 2: two partitions of 2 in one of six
    // slots (12) plus [1] in two of six slots (15), so 27. Total 34 rows.
    assert_eq!(text.lines().count(), 35, "{text}");
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn sweep_and_hist_outputs_are_byte_deterministic() {
    let dir = workdir("determinism");
    let csv_a = dir.join("a.csv");
    let csv_b = dir.join("b.csv");
    for path in [&csv_a, &csv_b] {
        let out = run(&[
            "sweep", "elliptic", "--curve", "0,0,0,1,0", "--n", "2", "--xmax", "500", "--cm-disc",
            "-4", "--out", path.to_str().expect("utf8 path"),
        ]);
        assert!(out.status.success());
    }
    let bytes_a = fs::read(&csv_a).expect("csv a");
    let bytes_b = fs::read(&csv_b).expect("csv b");
    assert_eq!(bytes_a, bytes_b);

    let json_a = dir.join("a.json");
    let json_b = dir.join("b.json");
    for path in [&json_a, &json_b] {
        let out = run(&[
            "hist", "--in", csv_a.to_str().expect("utf8 path"), "--bins", "12", "--density",
            "arcsine", "--split-only", "--out", path.to_str().expect("utf8 path"),
        ]);
        assert!(out.status.success());
    }
    assert_eq!(fs::read(&json_a).expect("json a"), fs::read(&json_b).expect("json b"));
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn split_only_filter_changes_sample_size() {
    let dir = workdir("splitonly");
    let csv = dir.join("sweep.csv");
    let out = run(&[
        "sweep", "elliptic", "--curve", "0,0,0,1,0", "--n", "1", "--xmax", "300", "--cm-disc",
        "-4", "--out", csv.to_str().expect("utf8 path"),
    ]);
    assert!(out.status.success());

    let all_json = dir.join("all.json");
    let split_json = dir.join("split.json");
    let out = run(&[
        "hist", "--in", csv.to_str().expect("utf8 path"), "--bins", "8", "--density",
        "semicircle", "--out", all_json.to_str().expect("utf8 path"),
    ]);
    assert!(out.status.success());
    let out = run(&[
        "hist", "--in", csv.to_str().expect("utf8 path"), "--bins", "8", "--density",
        "semicircle", "--split-only", "--out", split_json.to_str().expect("utf8 path"),
    ]);
    assert!(out.status.success());

    let all: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&all_json).expect("json")).expect("valid json");
    let split: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&split_json).expect("json")).expect("valid json");
    let all_n = all["sample_size"].as_u64().expect("sample_size");
    let split_n = split["sample_size"].as_u64().expect("sample_size");
    // Split primes of Q(i) are about half of all primes.
    assert!(split_n < all_n, "{split_n} vs {all_n}");
    assert!(split_n > all_n / 3);
    assert_eq!(split["metadata"]["split_only"], serde_json::json!(true));
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn hist_rejects_empty_filter_results() {
    let dir = workdir("emptyfilter");
    let csv = dir.join("sweep.csv");
    // No --cm-disc: the split column is empty, so --split-only drops all.
    let out = run(&[
        "sweep", "elliptic", "--curve", "0,0,0,-432,8208", "--n", "1", "--xmax", "100", "--out",
        csv.to_str().expect("utf8 path"),
    ]);
    assert!(out.status.success());
    let out = run(&[
        "hist", "--in", csv.to_str().expect("utf8 path"), "--bins", "8", "--density",
        "semicircle", "--split-only", "--out", dir.join("h.json").to_str().expect("utf8 path"),
    ]);
    assert_eq!(out.status.code(), Some(1));
    fs::remove_dir_all(&dir).ok();
}
