use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name).display().to_string()
}

fn rmcalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rmcalc")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn run_identity() {
    let o = rmcalc(&["run", "--program", &fixture("identity.tm"), "--input", "0110"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "0110\n");
}

#[test]
fn run_reports_undefined_and_compacts_zeros() {
    let o = rmcalc(&["run", "--program", &fixture("divergent.tm"), "--input", "01", "--trace"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.starts_with("undefined (budget_exceeded)"), "{s}");
    assert!(s.contains("steps 3\n"), "{s}");
    let o = rmcalc(&["run", "--program", &fixture("s.tm"), "--input", "0*12 1"]);
    assert_eq!(stdout(&o), "0*288 1\n");
}

#[test]
fn pipeline_matches() {
    let o = rmcalc(&["pipeline", "--program", &fixture("witness_a1.tm"), "--input", "0100100", "--diff"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert_eq!(s, "chain  0100100\ndirect 0100100\nMATCH\n");
}

#[test]
fn eval_expression() {
    let w = format!("W={}", fixture("witness_a1.tm"));
    let o = rmcalc(&["eval", "--program", &w, "--expr", "decode2 . evRcc . gammaq", "--input", "code(W)11 0100100"]);
    assert_eq!(o.status.code(), Some(0));
    let again = rmcalc(&["eval", "--program", &w, "--expr", "pi(code(W)11)", "--input", "0100100"]);
    assert_eq!(stdout(&o), stdout(&again));
    let o = rmcalc(&["eval", "--expr", "rho1", "--input", "0"]);
    assert_eq!(stdout(&o), "undefined\n");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(rmcalc(&["run", "--program"]).status.code(), Some(2));
    assert_eq!(rmcalc(&["eval", "--expr", "nosuch"]).status.code(), Some(2));
    assert_eq!(rmcalc(&["run", "--program", "/no/such/file", "--input", "0"]).status.code(), Some(2));
    assert_eq!(rmcalc(&["check", "--suite", "nosuch"]).status.code(), Some(2));
    assert_eq!(rmcalc(&["lab", "witness", "--a", "2"]).status.code(), Some(2));
}

#[test]
fn invert_strengthened() {
    let o = rmcalc(&["invert", "--program", &fixture("witness_a1_head.tm"), "--oracle", "brute", "--check", "strengthened"]);
    let s = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{s}");
    assert!(s.ends_with("PASS\n"));
    assert!(s.contains("max domain_tests"));
}

#[test]
fn lab_commands() {
    let o = rmcalc(&["lab", "witness", "--a", "1", "--nmax", "10"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("pass ")).count(), 4);

    let o = rmcalc(&["lab", "witness", "--a", "1", "--family", "1"]);
    assert_eq!(o.status.code(), Some(1));

    let o = rmcalc(&["lab", "sgrowth", "--m", "2", "--n", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l.split_whitespace().take(3).eq(["2", "2", "128"])));

    let o = rmcalc(&[
        "lab", "trace", "--word", "contr . recontr^4 . evRcc . reexpand^2 . expand . gamma(P)",
        "--program", &fixture("witness_a1.tm"), "--input", "01010010", "--format", "records",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert_eq!(s.lines().count(), 11);
    assert!(s.lines().last().unwrap().contains("\"shape\":[") && s.lines().last().unwrap().contains(",8,0,0]"), "{s}");
}

#[test]
fn check_is_deterministic() {
    let a = rmcalc(&["check", "--suite", "star-identity", "--samples", "50"]);
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    let b = rmcalc(&["check", "--suite", "star-identity", "--samples", "50", "--parallel", "2"]);
    assert_eq!(stdout(&a), stdout(&b));
    let o = rmcalc(&["check", "--suite", "n-sequence", "--timing"]);
    assert!(stdout(&o).contains("total "));
}
