use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn qlambert(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qlambert"))
        .args(args)
        .env_remove("QLAMBERT_PRECISION")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let o = qlambert(&full);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn eval_erdos_borwein() {
    let o = qlambert(&["eval", "--q1", "1/2", "--p2", "2", "--sign", "minus", "--digits", "20"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("1.6066951524152917637"));
}

#[test]
fn eval_special_plus() {
    // mpmath: Σ 2^-k / (1 + 4^-k) = 0.883093003564743525...
    let v = json(&[
        "eval", "--p", "2", "--r1", "1", "--r2", "2", "--sign", "plus", "--digits", "10",
    ]);
    assert_eq!(v["rows"][0]["value"], "0.8830930035");
}

#[test]
fn invalid_parameters_exit_two() {
    for args in [
        vec!["eval", "--q1", "3/2", "--p2", "2"],
        vec!["eval", "--q1", "1/2", "--p2", "2", "--p", "2"],
        vec!["eval", "--p", "2", "--r1", "2", "--r2", "4"],
        vec!["eval", "--q1", "half", "--p2", "2"],
        vec!["verify", "--kind", "xi", "--q1", "1/2", "--p2", "2"],
        vec!["verify", "--kind", "xi"],
        vec!["tables", "--which", "3"],
        vec!["cyclo", "lemma-a2", "--sigma", "4"],
        vec![
            "cyclo",
            "totient-sum",
            "--variant",
            "ametb",
            "--a",
            "2",
            "--b",
            "4",
            "--N",
            "1000",
        ],
    ] {
        let o = qlambert(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn verify_passes() {
    let o = qlambert(&[
        "verify", "--p", "2", "--r1", "1", "--r2", "1", "--sign", "minus", "--kind", "special", "--nmax", "20",
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("PASS"));
    let o = qlambert(&[
        "verify", "--q1", "2/3", "--p2", "2", "--sign", "plus", "--kind", "general", "--nmax", "15",
    ]);
    assert!(o.status.success());
}

#[test]
fn verify_reports_failing_index() {
    let o = qlambert(&[
        "verify", "--p", "3", "--r1", "2", "--r2", "3", "--sign", "plus", "--kind", "xi", "--nmax", "15",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("n = 15") && err.contains("4561"), "{err}");
}

#[test]
fn tables_csv_layout() {
    let o = qlambert(&["tables", "--which", "1", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 11);
    assert_eq!(lines[0], "r2,minus,minus_decimal,plus,plus_decimal");
    assert!(lines.iter().all(|l| l.split(',').count() == 5));
}

#[test]
fn table_two_first_row() {
    let v = json(&["tables", "--which", "2"]);
    assert_eq!(v["rows"].as_array().unwrap().len(), 10);
    assert_eq!(v["rows"][0]["minus"], "2π²/(π²-2)");
    assert_eq!(v["rows"][0]["minus_decimal"], "2.508284762");
}

#[test]
fn cyclotomic_commands() {
    let o = qlambert(&["cyclo", "lemma-a1", "--n", "30", "--r", "6"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("PASS"));
    let v = json(&[
        "cyclo",
        "totient-sum",
        "--variant",
        "ametb",
        "--a",
        "2",
        "--b",
        "1",
        "--N",
        "1000000",
    ]);
    assert!(v["rows"][0]["rel_error"].as_f64().unwrap() < 0.02);
    let v = json(&["cyclo", "nice-p", "--p", "2", "--r1", "1", "--r2", "1", "--nmax", "10"]);
    assert_eq!(v["rows"].as_array().unwrap().len(), 9);
}

#[test]
fn tight_tolerance_fails_with_exit_one() {
    let o = qlambert(&[
        "cyclo",
        "totient-sum",
        "--variant",
        "ametb",
        "--a",
        "2",
        "--b",
        "1",
        "--N",
        "1000",
        "--tolerance",
        "1e-9",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn json_is_deterministic_and_uses_strings() {
    let args = [
        "--format", "json", "verify", "--p", "2", "--r1", "1", "--r2", "2", "--kind", "xi", "--nmax", "6",
    ];
    let a = qlambert(&args);
    let b = qlambert(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["config"]["kind"], "xi");
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 6);
    assert_eq!(rows[2]["e"], "-47089/3");
    assert_eq!(rows[2]["a"], "5717406256968");
    assert!(rows[5]["residual"]["mid"].is_string());
}

#[test]
fn cache_round_trips_byte_identically() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("records");
    let base = [
        "--format", "json", "verify", "--p", "2", "--r1", "1", "--r2", "1", "--kind", "special", "--nmax", "8",
    ];
    let plain = qlambert(&base);
    let mut with_cache = base.to_vec();
    with_cache.extend_from_slice(&["--cache", cache.to_str().unwrap()]);

    let first = qlambert(&with_cache);
    let files: Vec<_> = fs::read_dir(&cache).unwrap().map(|e| e.unwrap().path()).collect();
    assert_eq!(files.len(), 8);
    assert!(files.iter().all(|p| p.file_stem().unwrap().len() == 64));
    let before: Vec<Vec<u8>> = files.iter().map(|p| fs::read(p).unwrap()).collect();

    let second = qlambert(&with_cache);
    assert_eq!(plain.stdout, first.stdout);
    assert_eq!(first.stdout, second.stdout);
    let after: Vec<Vec<u8>> = files.iter().map(|p| fs::read(p).unwrap()).collect();
    assert_eq!(before, after);
}

#[test]
fn precision_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_qlambert"))
        .args(["--format", "json", "eval", "--q1", "1/2", "--p2", "2", "--digits", "10"])
        .env("QLAMBERT_PRECISION", "300")
        .output()
        .unwrap();
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["config"]["precision"], 300);
    assert_eq!(v["rows"][0]["precision_bits"], 300);
}
