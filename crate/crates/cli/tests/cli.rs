use assert_cmd::Command;
use predicates::prelude::*;
use serde_json::Value;

fn cmreg() -> Command {
    let mut c = Command::cargo_bin("cmreg").unwrap();
    c.env("NO_COLOR", "1");
    c
}

fn json(args: &[&str]) -> Value {
    let out = cmreg().args(args).args(["--output", "json"]).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

const CELL: [&str; 8] = ["--p", "3", "--l", "5", "--a", "1", "--b", "1"];

#[test]
fn hodge_table() {
    cmreg()
        .arg("hodge")
        .args(CELL)
        .assert()
        .success()
        .stdout(predicate::str::contains("{1,2,3}"))
        .stdout(predicate::str::contains("fail").not());
}

#[test]
fn hodge_json() {
    let v = json(&["hodge", "--p", "3", "--l", "5", "--a", "1", "--b", "1"]);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["params"]["c"], 2);
    assert_eq!(v["components"][0]["index_sets"]["I1"], serde_json::json!([1, 2, 3]));
    let total: i64 = ["f2", "gr1", "gr0"]
        .iter()
        .map(|k| v["components"][0]["dims"][k].as_i64().unwrap())
        .sum();
    assert_eq!(total, 4);
}

#[test]
fn composite_p_is_rejected() {
    cmreg()
        .args(["hodge", "--p", "4", "--l", "5", "--a", "1", "--b", "1"])
        .assert()
        .code(2)
        .stderr(predicate::str::contains("p must be prime"));
}

#[test]
fn tol_out_of_range() {
    cmreg()
        .arg("regulator")
        .args(CELL)
        .args(["--tol", "1e-2"])
        .assert()
        .code(2);
}

#[test]
fn period_unit_h() {
    cmreg()
        .args(["period", "--p", "2", "--l", "3", "--a", "1", "--b", "1", "--h", "1"])
        .assert()
        .success()
        .stdout(predicate::str::contains("pass"));
}

#[test]
fn period_non_unit_h() {
    cmreg()
        .args(["period", "--p", "2", "--l", "3", "--a", "1", "--b", "1", "--h", "3"])
        .assert()
        .code(2);
}

#[test]
fn period_json_rationals() {
    let v = json(&["period", "--p", "2", "--l", "3", "--a", "1", "--b", "1"]);
    let row = &v["rows"][0];
    assert_eq!(row["alpha"], "1/2");
    assert_eq!(row["mu"], "1/3");
    assert!(row["gamma_product"]["err"].as_f64().unwrap() >= 0.0);
}

#[test]
fn regulator_nonvanishing() {
    let v = json(&["regulator", "--p", "3", "--l", "5", "--a", "1", "--b", "1"]);
    assert_eq!(v["nonvanishing"]["pass"], true);
    assert!(v["legendre"].is_null());
}

#[test]
fn regulator_legendre_section() {
    cmreg()
        .args(["regulator", "--p", "2", "--l", "3", "--a", "1", "--b", "1"])
        .assert()
        .success()
        .stdout(predicate::str::contains("legendre probe"))
        .stdout(predicate::str::contains("note: non-vanishing check skipped"));
}

#[test]
fn regulator_bad_m() {
    cmreg()
        .arg("regulator")
        .args(CELL)
        .args(["--m", "4", "--n", "1"])
        .assert()
        .code(2);
}

#[test]
fn verify_single_cell() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    cmreg()
        .arg("verify")
        .args(CELL)
        .args(["--criteria", "1,2,4,9", "--report"])
        .arg(&path)
        .assert()
        .success()
        .stdout(predicate::str::contains("[PASS]  4"));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["criteria"].as_array().unwrap().len(), 4);
    assert_eq!(v["pass"], true);
}

#[test]
fn verify_injected_fault() {
    cmreg()
        .arg("verify")
        .args(CELL)
        .args(["--criteria", "4", "--inject-fault"])
        .assert()
        .code(1)
        .stdout(predicate::str::contains("[FAIL]"));
}

#[test]
fn gm_golden() {
    let want = include_str!("golden/gm_3_5_1_1.txt");
    let out = cmreg().arg("gm").args(CELL).output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), want);
}

#[test]
fn csv_sections() {
    let out = cmreg().arg("gm").args(CELL).args(["--output", "csv"]).output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    let mut r = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(text.as_bytes());
    let titles: Vec<String> = r
        .records()
        .map(|x| x.unwrap())
        .filter(|x| &x[0] == "section")
        .map(|x| x[1].to_string())
        .collect();
    assert_eq!(titles.len(), 3);
    assert_eq!(titles[2], "monodromy");
}
