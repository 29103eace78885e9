//! End-to-end checks of the command-line surface: outputs and exit codes.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dipole-atlas"))
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = bin().args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn count_pqn_matches_documented_examples() {
    let (code, stdout, _) = run(&["count", "pqn", "--p", "1", "--q", "1", "--n", "2", "--g", "0"]);
    assert_eq!(code, 0);
    assert_eq!(stdout, "1\n");

    let (code, stdout, _) = run(&[
        "count", "abcd", "--a", "1", "--b", "0", "--c", "2", "--d", "1", "--g", "1",
    ]);
    assert_eq!(code, 0);
    assert_eq!(stdout, "8\n");
}

#[test]
fn psi_values() {
    let (code, stdout, _) = run(&["psi", "3"]);
    assert_eq!(code, 0);
    assert_eq!(stdout, "1\n");
    let (code, stdout, _) = run(&["psi", "3,1"]);
    assert_eq!(code, 0);
    assert_eq!(stdout, "4\n");
}

#[test]
fn table_is_byte_stable() {
    let (code, first, _) = run(&["table", "--n-max", "3", "--g-max", "1"]);
    assert_eq!(code, 0);
    assert!(first.starts_with("p,q,n,g,count\n1,1,2,0,1\n"));
    let (_, second, _) = run(&["table", "--n-max", "3", "--g-max", "1"]);
    assert_eq!(first, second);
}

#[test]
fn oracle_count_filters() {
    let (code, stdout, _) = run(&["oracle", "count", "--filter", "pqn(1,1,2,0)"]);
    assert_eq!(code, 0);
    assert_eq!(stdout, "1\n");
    let (code, stdout, _) = run(&["oracle", "count", "--filter", "face_seq(3)"]);
    assert_eq!(code, 0);
    assert_eq!(stdout, "1\n");
}

#[test]
fn series_dump_shape() {
    let (code, stdout, _) = run(&["series", "dump", "--which", "Gamma0", "--order", "2"]);
    assert_eq!(code, 0);
    let value: serde_json::Value = serde_json::from_str(&stdout).expect("valid JSON");
    assert_eq!(value["which"], "Gamma0");
    assert!(value["terms"].as_array().map(|a| !a.is_empty()).unwrap_or(false));
}

#[test]
fn usage_errors_exit_one() {
    let (code, _, _) = run(&["count", "pqn", "--p", "1", "--q", "1"]);
    assert_eq!(code, 1);
    let (code, _, _) = run(&["frobnicate"]);
    assert_eq!(code, 1);
    // Out-of-range arguments are execution errors, also exit 1.
    let (code, _, stderr) = run(&["count", "pqn", "--p", "9", "--q", "1", "--n", "2"]);
    assert_eq!(code, 1);
    assert!(stderr.contains("invalid argument"));
}

#[test]
fn resource_guards_require_override() {
    let (code, _, stderr) = run(&["oracle", "count", "--filter", "face_seq(11)"]);
    assert_eq!(code, 1);
    assert!(stderr.contains("resource guard"));
    let (code, _, stderr) = run(&[
        "count", "pqn", "--p", "1", "--q", "1", "--n", "12", "--order", "11",
    ]);
    assert_eq!(code, 1);
    assert!(stderr.contains("resource guard") || stderr.contains("--unsafe-order"));
}

#[test]
fn oracle_verify_passes_at_small_n() {
    let (code, stdout, _) = run(&["oracle", "verify", "--max-n", "4"]);
    assert_eq!(code, 0, "stdout: {stdout}");
    assert!(stdout.contains("PASS central-psi"));
    assert!(stdout.contains("PASS oracle-agreement"));
}
