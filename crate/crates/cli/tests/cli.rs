use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_posetdim"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

fn without_timing(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timing");
    v
}

#[test]
fn exact_dimension_of_d6() {
    let out = run(&["dim", "exact", "--input", fixture("d6.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = report(&out);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["tool"]["name"], "posetdim");
    assert_eq!(v["result"]["dimension"], 2);
    assert!(v["timing"]["timestamp"].is_u64());
}

#[test]
fn check_realiser_verdicts() {
    let poset = fixture("d6.json");
    let ok = run(&[
        "poset",
        "check-realiser",
        "--poset",
        poset.to_str().unwrap(),
        "--realiser",
        fixture("d6_realiser.json").to_str().unwrap(),
    ]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(report(&ok)["verdict"], true);

    let bad = run(&[
        "poset",
        "check-realiser",
        "--poset",
        poset.to_str().unwrap(),
        "--realiser",
        fixture("d6_chain.json").to_str().unwrap(),
    ]);
    assert_eq!(bad.status.code(), Some(1));
    let v = report(&bad);
    assert_eq!(v["verdict"], false);
    assert!(v["result"]["witness"].is_object());
}

#[test]
fn usage_and_precondition_errors_exit_2() {
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&["dim", "exact", "--input", "/nonexistent/poset.json"]).status.code(), Some(2));
    assert_eq!(run(&["div", "realiser", "--n", "0", "--kappa", "2"]).status.code(), Some(2));
    assert_eq!(run(&["poly", "bound", "--q", "6", "--delta", "2"]).status.code(), Some(2));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
}

#[test]
fn same_seed_gives_identical_reports() {
    let args = ["--seed", "7", "multiset", "realiser", "--n", "5", "--k", "1", "--l", "3"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(without_timing(report(&a)), without_timing(report(&b)));

    let poly = ["--seed", "3", "poly", "realiser", "--q", "2", "--d0", "3", "--delta", "2"];
    assert_eq!(without_timing(report(&run(&poly))), without_timing(report(&run(&poly))));
}

#[test]
fn csv_export_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("rows.csv");
    let json = dir.path().join("report.json");
    let out = run(&[
        "--csv",
        csv.to_str().unwrap(),
        "--out",
        json.to_str().unwrap(),
        "div",
        "bound",
        "--kappa",
        "2,6,100",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("instance,"));
    assert_eq!(lines.count(), 3);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v["command"], "div bound");

    let no_rows = run(&["--csv", csv.to_str().unwrap(), "dim", "exact", "--input", fixture("d6.json").to_str().unwrap()]);
    assert_eq!(no_rows.status.code(), Some(2));
}

#[test]
fn acceptance_subcommand() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("empty.json");
    std::fs::write(&cfg, r#"{"criteria": []}"#).unwrap();
    let empty = run(&["accept", "--config", cfg.to_str().unwrap()]);
    assert_eq!(empty.status.code(), Some(0));
    assert_eq!(report(&empty)["result"]["passed"], 0);

    let good = run(&["--jobs", "2", "accept", "--criteria", "1,2"]);
    assert_eq!(good.status.code(), Some(0));
    assert_eq!(report(&good)["verdict"], true);

    let corrupt = run(&["accept", "--criteria", "1", "--corrupt", "1"]);
    assert_eq!(corrupt.status.code(), Some(1));
    let v = report(&corrupt);
    assert!(v["result"]["outcomes"][0]["witness"].is_string());
    assert!(String::from_utf8_lossy(&corrupt.stderr).contains("FAIL"));
}
