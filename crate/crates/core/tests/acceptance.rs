//! One test, and one printed verdict line, per acceptance criterion.

use rmcalc::suites::{run_suite, SuiteOptions};

fn criterion(name: &str) {
    let r = run_suite(name, &SuiteOptions::default()).expect("known suite");
    println!("{} ({:.2?})", r.line(), r.elapsed);
    for d in &r.details {
        println!("       {d}");
    }
    assert!(r.passed, "{}", r.line());
}

#[test]
fn criterion_01_star_identity() {
    criterion("star-identity");
}

#[test]
fn criterion_02_factorization() {
    criterion("factorization");
}

#[test]
fn criterion_03_regular_factorization() {
    criterion("regular-factorization");
}

#[test]
fn criterion_04_right_ideal() {
    criterion("right-ideal");
}

#[test]
fn criterion_05_balanced_inverse() {
    criterion("balanced-inverse");
}

#[test]
fn criterion_06_inverse_construction() {
    criterion("inverse-construction");
}

#[test]
fn criterion_07_witness_family() {
    criterion("witness-family");
}

#[test]
fn criterion_08_suffix_tracer() {
    criterion("suffix-tracer");
}

#[test]
fn criterion_09_s_growth() {
    criterion("s-growth");
}

#[test]
fn criterion_10_n_sequence() {
    criterion("n-sequence");
}

#[test]
fn criterion_11_budget() {
    criterion("budget");
}

#[test]
fn criterion_12_fpref() {
    criterion("fpref");
}
