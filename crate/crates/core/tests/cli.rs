use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_paralattice")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn formula_row_has_exact_column() {
    let out = run(&["formula", "--n", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,error,error_exact,count,sqrt_nstar,class_terms"));
    assert!(lines.next().unwrap().starts_with("7,-1.666667,-5/3,"));
}

#[test]
fn verify_reports_no_mismatches() {
    let out = run(&["verify", "--max", "101"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).lines().any(|l| l == "mismatches,0"));
}

#[test]
fn count_in_dimension_three() {
    let out = run(&["count", "--dim", "3", "--q", "1,0,1", "--c", "1", "--r", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "r,count,ambiguous_fibers\n2,33,0\n");
}

#[test]
fn json_mirrors_csv_columns() {
    let out = run(&["--json", "formula", "--n", "7"]);
    let value: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let row = value[0].as_object().unwrap();
    let keys: Vec<&str> = row.keys().map(String::as_str).collect();
    assert_eq!(keys, ["n", "error", "error_exact", "count", "sqrt_nstar", "class_terms"]);
    assert_eq!(row["error_exact"], "-5/3");
    assert_eq!(row["n"], 7);
}

#[test]
fn sweeps_are_deterministic_and_seeded() {
    let a = run(&["expsum", "--n", "64", "--samples", "5", "--seed", "3"]);
    let b = run(&["--jobs", "1", "expsum", "--n", "64", "--samples", "5", "--seed", "3"]);
    let c = run(&["expsum", "--n", "64", "--samples", "5", "--seed", "4"]);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
    let hl = run(&["hl", "--n", "100", "--x", "0"]);
    assert!(stdout(&hl).contains("100,0,0.000000,0,1,201.000000,2.010000,true"));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
    let unknown = run(&["count", "--frobnicate"]);
    assert_eq!(unknown.status.code(), Some(1));
    assert!(!unknown.stderr.is_empty());
    assert_eq!(run(&["formula", "--n", "8"]).status.code(), Some(1));
    assert_eq!(run(&["omega", "--kind", "growth", "--r", "5"]).status.code(), Some(1));
}

#[test]
fn other_subcommands() {
    let lfun = stdout(&run(&["lfun", "--d", "7"]));
    assert!(lfun.contains("7,1.187410,1.000000,1,-7,1"));
    let classes = stdout(&run(&["classnum", "--d", "23"]));
    assert!(classes.contains("23,true,3,2,"));
    let farey = stdout(&run(&["farey", "--x", "0.3", "--order", "3"]));
    assert!(farey.contains("0.300000,3,1,3,0.250000,1/4,0.400000,2/5"));
    let plus = stdout(&run(&["omega", "--kind", "plus", "--max", "5"]));
    assert!(plus.contains("5,25,10.333333,31/3,2.066667,31/15"));
    let family = stdout(&run(&["omega", "--kind", "family", "--max", "3"]));
    assert_eq!(family.lines().count(), 1 + 12);
    let fit = stdout(&run(&["scan", "--r-min", "3", "--r-max", "101", "--step", "2", "--fit"]));
    assert!(fit.starts_with("metric,value\nslope,"));
    let gauss = stdout(&run(&["gauss", "--n", "7", "--m", "3"]));
    assert!(gauss.contains(",-2.645751,-2.645751,-1,7"));
}
