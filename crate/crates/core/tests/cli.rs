use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn csknot(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_csknot")).args(args).output().expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    csknot(args).status.code().expect("exit code")
}

fn write(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("csknot-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

const COMPANION: &str = "0 1 0 0\n0 0 1 0\n0 0 0 1\n-1 9 -14 8\n";
const SECOND: &str = "2 3 0 0\n2 4 1 0\n0 1 1 1\n1 2 0 1\n";

#[test]
fn verify_poly_exit_codes() {
    assert_eq!(code(&["verify-poly", "1 -9 14 -8 1"]), 0);
    assert_eq!(code(&["verify-poly", "1 0 0 0 1"]), 2);
    assert_eq!(code(&["verify-poly", "1 x 3"]), 64);
    assert_eq!(code(&["no-such-command"]), 64);
}

#[test]
fn verify_matrix_reports_shape_errors() {
    let ok = write("ok.txt", SECOND);
    assert_eq!(code(&["verify-matrix", ok.to_str().unwrap()]), 0);
    let rect = write("rect.txt", "1 2 3\n4 5 6\n");
    assert_eq!(code(&["verify-matrix", rect.to_str().unwrap()]), 65);
    let ragged = write("ragged.txt", "1 2\n3\n");
    assert_eq!(code(&["verify-matrix", ragged.to_str().unwrap()]), 64);
}

#[test]
fn star_eq_separates_the_pair() {
    let a = write("a.txt", COMPANION);
    let b = write("b.txt", SECOND);
    let out = csknot(&["--format", "json", "star-eq", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["verdict"], "NotEquivalent");
    assert_eq!(v["route"], "IdealInvariant");
    assert_eq!(code(&["star-eq", a.to_str().unwrap(), a.to_str().unwrap()]), 0);
}

#[test]
fn classify_json_matches_text() {
    let out = csknot(&["--format", "json", "classify", "--a", "-8"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["complete"], true);
    assert_eq!(v["convention"]["coeff_order"], "ascending");
    let text = String::from_utf8(csknot(&["classify", "1 -9 14 -8 1"]).stdout).unwrap();
    assert!(text.contains("classes: 2 (complete)"), "{text}");
}

#[test]
fn emitted_matrices_reparse() {
    let out = csknot(&["--format", "json", "family", "--n", "5", "--l", "-1"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let m1 = &v["report"]["m1"];
    let text: String = m1
        .as_array()
        .unwrap()
        .iter()
        .map(|row| row.as_array().unwrap().iter().map(|x| x.as_str().unwrap().to_string()).collect::<Vec<_>>().join(" ") + "\n")
        .collect();
    let path = write("m1.txt", &text);
    assert_eq!(code(&["verify-matrix", path.to_str().unwrap()]), 0);
}

#[test]
fn sweep_csv_has_header_and_rows() {
    let out = csknot(&["--format", "csv", "sweep", "--a-min", "-9", "--a-max", "-7"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "a,integrally_closed,class_count_or_lower_bound,complete,group,norm_bound,error");
    assert_eq!(lines.len(), 4);
    assert!(lines.iter().any(|l| l.starts_with("-8,Yes,2,true")), "{text}");
    assert_eq!(code(&["--format", "csv", "verify-poly", "1 -9 14 -8 1"]), 64);
}
