use std::path::PathBuf;
use std::process::{Command, Output};

fn oscquad(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oscquad")).args(args).output().unwrap()
}

fn config(name: &str, body: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn csv_rows(out: &Output) -> Vec<csv::StringRecord> {
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    reader.records().map(|r| r.unwrap()).collect()
}

#[test]
fn integrate_with_flag_overrides() {
    let path = config(
        "fbeta.json",
        r#"{"integrand": {"family": "f_beta", "beta": 0.5}, "k": [1], "rule": {"N": 8, "M": 64}}"#,
    );
    let out = oscquad(&["integrate", "--config", path.to_str().unwrap(), "--k", "100,1000", "--format", "csv"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 2);
    assert_eq!(&rows[1][0], "1000");
    let err: f64 = rows[1][4].parse().unwrap();
    assert!(err < 1e-14, "error {err}");
    assert_eq!(&rows[1][5], "kummer");

    // a uniform mesh is much worse on the same problem
    let out = oscquad(&["integrate", "--config", path.to_str().unwrap(), "--k", "1000", "--q", "1", "--format", "csv"]);
    let uniform: f64 = csv_rows(&out)[0][4].parse().unwrap();
    assert!(uniform > 1e3 * err);
}

#[test]
fn invalid_config_names_the_field() {
    let path = config("bad.json", r#"{"integrand": {"family": "log"}, "k": [1], "rule": {"N": 4, "M": 8, "q": 0.5}}"#);
    let out = oscquad(&["integrate", "--config", path.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("rule.q"));

    let path = config("typo.json", r#"{"integrand": {"family": "log"}, "k": [1], "rule": {"N": 4, "M": 8}, "kk": 1}"#);
    let out = oscquad(&["integrate", "--config", path.to_str().unwrap()]);
    assert!(!out.status.success());
}

#[test]
fn experiment_csv_has_the_documented_columns() {
    let out = oscquad(&["experiment", "4", "--format", "csv"]);
    assert!(out.status.success());
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(
        header,
        ["experiment", "beta", "N", "M_or_L", "q", "k", "error_abs", "ratio", "f_evals", "seconds"]
    );
    assert_eq!(reader.records().count(), 16);
}

#[test]
fn compare_paper_adds_published_columns() {
    let out = oscquad(&["experiment", "3", "--format", "csv", "--compare-paper"]);
    assert!(out.status.success());
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 28);
    let q12_k10 = rows.iter().find(|r| &r[4] == "12.0000" && &r[5] == "10").unwrap();
    assert_eq!(&q12_k10[10], "1.1e-003");
}

#[test]
fn unknown_experiment_is_rejected() {
    let out = oscquad(&["experiment", "7"]);
    assert!(!out.status.success());
}

#[test]
fn shipped_configs_run() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs");
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let out = oscquad(&["integrate", "--config", path.to_str().unwrap(), "--format", "csv"]);
        assert!(out.status.success(), "{}: {}", path.display(), String::from_utf8_lossy(&out.stderr));
        assert!(!csv_rows(&out).is_empty());
    }
}
