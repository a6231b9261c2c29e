use std::path::PathBuf;

use rmcalc::fixtures::{self, WitnessKind};
use rmcalc::machine::{parse_program, serialize, PolyBound, Program};
use rmcalc::morphism::dsl::{parse, parse_word, Env};
use rmcalc::word::Word;

fn dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn load(name: &str) -> Program {
    let src = std::fs::read_to_string(dir().join(name)).unwrap();
    parse_program(&src).unwrap()
}

#[test]
fn program_files_match_constructors() {
    let q22 = PolyBound::new(2, 2).unwrap();
    let a1 = Word::lit("1");
    let tail = fixtures::witness_tail();
    let pairs = [
        ("identity.tm", fixtures::identity()),
        ("divergent.tm", fixtures::divergent()),
        ("append_one.tm", fixtures::append_one()),
        ("read_all_then_one.tm", fixtures::read_all_then_one()),
        ("identity_on_00.tm", fixtures::identity_on_00()),
        ("witness_a1.tm", fixtures::witness(&a1, WitnessKind::Identity, &tail, q22)),
        ("witness_a1_head.tm", fixtures::witness(&a1, WitnessKind::ConstHead, &tail, q22)),
        ("s.tm", fixtures::s_machine()),
    ];
    for (file, p) in pairs {
        assert_eq!(serialize(&load(file)), serialize(&p), "{file}");
    }
}

#[test]
fn expressions_evaluate_as_recorded() {
    let env = Env::new()
        .with("W", load("witness_a1.tm"))
        .with("H", load("witness_a1_head.tm"))
        .with("S", load("s.tm"));
    let src = std::fs::read_to_string(dir().join("expressions.txt")).unwrap();
    let mut n = 0;
    for line in src.lines().filter(|l| !l.trim().is_empty() && !l.starts_with('#')) {
        let parts: Vec<&str> = line.split(';').map(str::trim).collect();
        assert_eq!(parts.len(), 3, "{line}");
        let f = parse(parts[0], &env).unwrap();
        let x = parse_word(parts[1], &env).unwrap();
        let want = match parts[2] {
            "undefined" => None,
            s => Some(parse_word(s, &env).unwrap()),
        };
        assert_eq!(f.apply(&x), want, "{line}");
        n += 1;
    }
    assert!(n >= 15);
}
