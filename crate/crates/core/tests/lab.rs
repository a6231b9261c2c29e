use num_bigint::BigUint;
use rmcalc::fixtures::{self, WitnessKind};
use rmcalc::lab::*;
use rmcalc::machine::{enumerate_domc, gamma_program, run, PolyBound};
use rmcalc::morphism::{pi, rho};
use rmcalc::padding::{self, header, EvalConfig};
use rmcalc::word::{words_up_to, Word};

fn w(s: &str) -> Word {
    Word::lit(s)
}

#[test]
fn witness_for_one() {
    let p = witness_program(&w("1"));
    let dc = |n| -> Vec<String> { enumerate_domc(&p, n, 1 << 12).unwrap().iter().map(Word::bit_string).collect() };
    assert_eq!(dc(9), ["010010", "01010010"]);
    assert_eq!(dc(10), ["010010", "01010010", "0101010010"]);
    for z in words_up_to(4) {
        let x = w("010010").concat(&z);
        assert_eq!(run(&p, &x).into_output(), Some(x));
    }
    assert_eq!(run(&p, &w("0100")).into_output(), None);
}

#[test]
fn witness_properties_and_controls() {
    let p = witness_program(&w("1"));
    let fam = [witness_program(&w("0"))];
    let checks = check_witness_properties(&p, &w("1"), &fixtures::witness_tail(), &fam, 10);
    assert!(checks.iter().all(|c| c.passed), "{checks:?}");
    assert_eq!(checks.len(), 4);

    let self_fam = check_witness_properties(&p, &w("1"), &fixtures::witness_tail(), std::slice::from_ref(&p), 10);
    assert!(!self_fam.iter().find(|c| c.name == "distinct").unwrap().passed);

    let t = w("0011");
    let broken = fixtures::witness(&w("1"), WitnessKind::Identity, &t, PolyBound::new(1, 1).unwrap());
    let c = check_witness_properties(&broken, &w("1"), &t, &fam, 10);
    assert!(!c.iter().find(|c| c.name == "no-11").unwrap().passed);

    assert!(regex_domain_check(&p, &w("0"), &fixtures::witness_tail(), 20).is_err());
}

#[test]
fn certificates() {
    let p = fixtures::witness(&w("1"), WitnessKind::Identity, &fixtures::witness_tail(), PolyBound::new(2, 2).unwrap());
    assert!(s2q_certificate(&p, &PolyBound::new(12, 2).unwrap()));
    assert!(!s2q_certificate(&p, &PolyBound::new(1, 1).unwrap()));
    assert!(!s2q_certificate(&fixtures::append_one(), &PolyBound::new(12, 2).unwrap()));
    let g = gamma_program(&witness_program(&w("1")));
    assert!(s2q_certificate(&g, &PolyBound::new(2, 2).unwrap()));
}

#[test]
fn direct_simulation_agrees() {
    let cfg = EvalConfig::q2();
    let p = witness_program(&w("1"));
    let d = direct_simulation(&p, &cfg);
    let chain = padding::lemma_chain(&p);
    for x in words_up_to(10) {
        let r = run(&p, &x).into_output();
        assert_eq!(d.apply(&x), r, "{x}");
        assert_eq!(chain.apply(&x), r, "{x}");
    }
    let bad = direct_simulation(&fixtures::append_one(), &cfg);
    assert!(words_up_to(5).all(|x| bad.apply(&x).is_none()));
}

#[test]
fn traces() {
    let p = witness_program(&w("1"));
    let u = w("01".repeat(14).as_str()).concat(&fixtures::witness_tail());
    let input = header(&p).concat(&u);
    let x = GeneratorWord::new(vec![rho(&w("0")), pi(&w("0")), rho(&w("1")), pi(&w("1"))]);
    let tr = suffix_trace(&x, &input, &u);
    assert_eq!(tr.stages.len(), 5);
    assert_eq!(tr.min_suffix(), u.len());
    assert_eq!(tr.output, Some(input.clone()));

    let tr = suffix_trace(&gamma_chain(&p), &input, &u);
    let last = tr.last_shaped().unwrap();
    assert_eq!(last.shape.unwrap().2, 0);
    assert_eq!(tr.stages.last().unwrap().suffix, 0);
    assert!(tr.to_string().contains("evRcc"));

    let early = suffix_trace(&GeneratorWord::new(vec![pi(&w("0")), padding::contr_m()]), &input, &u);
    assert_eq!(early.undefined_at, Some(1));
    assert!(early.output.is_none());
}

#[test]
fn s_map() {
    let s = s_morphism();
    assert_eq!(s.apply(&w("0011")), Some(Word::zeros(8).concat(&w("11"))));
    assert_eq!(s.apply(&w("1")), Some(w("1")));
    assert_eq!(s.apply(&w("000")), None);
    assert_eq!(s_iterate(2, 2), BigUint::from(128u32));
}
