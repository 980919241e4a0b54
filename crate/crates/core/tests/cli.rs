use std::process::{Command, Output};

use serde_json::Value;

fn nclocal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nclocal"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_ok(args: &[&str]) -> Value {
    let out = nclocal(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn csv_ok(args: &[&str]) -> Vec<csv::StringRecord> {
    let mut full = vec!["--format", "csv"];
    full.extend_from_slice(args);
    let out = nclocal(&full);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let mut r = csv::Reader::from_reader(out.stdout.as_slice());
    let width = r.headers().unwrap().len();
    let rows: Vec<_> = r.records().map(|x| x.unwrap()).collect();
    assert!(rows.iter().all(|x| x.len() == width));
    rows
}

const CM4: &str = "[0,0,0,-1,0]";

#[test]
fn continued_fraction() {
    let v = json_ok(&["cf", "(1+sqrt(5))/2", "--convergents", "3"]);
    assert_eq!(v["period"], serde_json::json!([1]));
    assert_eq!(v["convergents"], serde_json::json!(["1", "2", "3/2"]));
    assert_eq!(v["reduced"], true);
    assert!(!csv_ok(&["cf", "(0+sqrt(7))/1"]).is_empty());
}

#[test]
fn matrix_and_k0() {
    let v = json_ok(&["matrix", "--period", "1,2", "--pow", "2"]);
    assert!(v.is_object());
    csv_ok(&["matrix", "--period", "3"]);
    let v = json_ok(&["k0", "--matrix", "[[2,1],[1,1]]"]);
    assert_eq!(v["k0"]["order"], 1);
    let v = json_ok(&["k0", "--matrix", "[[1,1],[-4,1]]"]);
    assert_eq!(v["k0"]["structure"], "Z/4");
    csv_ok(&["k0", "--matrix", "[[0,1],[1,0]]"]);
}

#[test]
fn curve_and_localize() {
    let v = json_ok(&["curve", "--model", CM4, "--p", "5", "--n", "2"]);
    assert!(v.is_object());
    csv_ok(&["curve", "--model", CM4, "--p", "7"]);
    let v = json_ok(&["localize", "--model", CM4, "--p", "5", "--nmax", "3"]);
    let text = v.to_string();
    assert!(text.contains("\"a_p\":-2"), "{text}");
    csv_ok(&[
        "localize",
        "--model",
        "[0,-1,1,-10,-20]",
        "--p",
        "11",
        "--nmax",
        "2",
    ]);
    json_ok(&["localize", "--model", CM4, "--p", "5", "--period", "1,1"]);
}

#[test]
fn zeta_matches_at_good_primes() {
    let rows = csv_ok(&["zeta", "--model", CM4, "--primes", "5,7", "--order", "3"]);
    assert_eq!(rows.len(), 2);
    assert_eq!(&rows[0][4], "match");
    assert_eq!(&rows[0][6], "1;8;48;248");
    json_ok(&[
        "zeta",
        "--model",
        "[0,0,1,-1,0]",
        "--primes",
        "2..40",
        "--mode",
        "signed",
    ]);
    // a period is exploration only and never fails the run
    json_ok(&["zeta", "--model", CM4, "--primes", "3..20", "--period", "1"]);
}

#[test]
fn theorem1_passes_and_catalog_loads() {
    let v = json_ok(&[
        "theorem1", "--model", CM4, "--p", "7", "--trials", "5", "--seed", "1",
    ]);
    assert_eq!(v["all_pass"], true);
    csv_ok(&[
        "theorem1",
        "--model",
        "[0,0,0,0,1]",
        "--p",
        "3",
        "--trials",
        "4",
    ]);
    let v = json_ok(&["catalog"]);
    assert!(v.as_array().unwrap().len() >= 2);
    assert!(csv_ok(&["catalog"]).len() >= 2);
}

#[test]
fn bad_input_exits_with_two() {
    for args in [
        &["theorem1", "--model", CM4, "--p", "4"][..],
        &["curve", "--model", "[0,0,0,0,0]", "--p", "5"],
        &["curve", "--model", "[0,0,0,1]", "--p", "5"],
        &["cf", "(1+sqrt(4))/2"],
        &["k0", "--matrix", "[[1,2],[3]]"],
        &["zeta", "--model", CM4, "--primes", "2,9"],
        &["localize", "--model", CM4, "--p", "5", "--nmax", "0"],
        &["matrix", "--period", "0,1"],
        &["nonsense"],
    ] {
        let out = nclocal(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}
