use rmcalc::fixtures::{self, WitnessKind};
use rmcalc::machine::*;
use rmcalc::word::{code, Word};

fn w(s: &str) -> Word {
    s.parse().unwrap()
}

fn out(p: &Program, x: &str) -> Option<String> {
    run(p, &w(x)).into_output().map(|y| y.bit_string())
}

#[test]
fn identity_copies() {
    let p = fixtures::identity();
    assert_eq!(out(&p, "0110").as_deref(), Some("0110"));
    match run(&p, &w("0110")) {
        RunOutcome::Output { steps, .. } => assert!(steps <= p.bound().eval(4)),
        o => panic!("{o:?}"),
    }
}

#[test]
fn divergent_runs_out_of_budget() {
    let p = fixtures::divergent();
    for n in [0u128, 1, 7, 200] {
        let r = run_traced(&p, &Word::zeros(n), None);
        assert_eq!(r.outcome, RunOutcome::Undefined(Reason::BudgetExceeded));
        assert_eq!(r.steps, p.bound().eval(n));
    }
}

#[test]
fn witness_a1() {
    let q = PolyBound::new(2, 2).unwrap();
    let p = fixtures::witness(&w("1"), WitnessKind::Identity, &fixtures::witness_tail(), q);
    assert_eq!(out(&p, "0100100").as_deref(), Some("0100100"));
    assert_eq!(out(&p, "0100"), None);
    assert!(is_domc(&p, &w("010010")));
    assert!(is_domc(&p, &w("01010010")));
    assert!(!is_domc(&p, &w("0101001")));
    let h = fixtures::witness(&w("1"), WitnessKind::ConstHead, &fixtures::witness_tail(), q);
    assert_eq!(out(&h, "0100101").as_deref(), Some("1000001"));
}

#[test]
fn s_machine_squares() {
    let p = fixtures::s_machine();
    assert_eq!(out(&p, "001").as_deref(), Some("000000001"));
    assert_eq!(out(&p, "0011").as_deref(), Some("0000000011"));
    assert_eq!(out(&p, "10").as_deref(), Some("10"));
    for n in 0..12u128 {
        let y = run(&p, &Word::zeros(n).concat(&w("101"))).into_output().unwrap();
        assert_eq!(y.leading_zeros(), 2 * n * n);
    }
    assert_eq!(out(&p, "000"), None);
}

#[test]
fn serial_and_text_round_trip() {
    let q = PolyBound::new(2, 2).unwrap();
    let ps = vec![
        fixtures::identity(),
        fixtures::s_machine(),
        fixtures::read_all_then_one(),
        fixtures::witness(&w("10"), WitnessKind::ConstHead, &fixtures::witness_tail(), q),
    ];
    for p in &ps {
        let c = serialize(p);
        assert_eq!(&deserialize(&c).unwrap(), p);
        assert_eq!(&parse_program(&program_to_text(p)).unwrap(), p);
        let e = ex_transform(p);
        assert_eq!(deserialize(&serialize(&e)).unwrap(), e);
    }
    assert!(deserialize(&Word::empty()).is_err());
}

#[test]
fn ex_behaviour() {
    let q = PolyBound::new(2, 2).unwrap();
    let p = fixtures::witness(&w("1"), WitnessKind::ConstHead, &fixtures::witness_tail(), q);
    let e = ex_transform(&p);
    assert_eq!(e.bound(), PolyBound::new(12, 1).unwrap());
    for h in [1u128, 3, 40] {
        let u = w("010010");
        let fu = w("100000");
        let mk = |m: &Word, v: &str| Word::zeros(h).concat(&w("1")).concat(m).concat(&Word::lit(v));
        let y = run(&e, &mk(&u, "0110")).into_output().unwrap();
        assert_eq!(y, mk(&fu, "0110"));
    }
    assert_eq!(ex_bound(PolyBound::new(100, 3).unwrap()), PolyBound::new(14, 2).unwrap());
    assert_eq!(ex_bound(PolyBound::new(1, 1).unwrap()), PolyBound::new(12, 1).unwrap());
}

#[test]
fn gamma_program_extracts() {
    let q = PolyBound::new(2, 2).unwrap();
    let p = fixtures::witness(&w("1"), WitnessKind::Identity, &fixtures::witness_tail(), q);
    let g = gamma_program(&p);
    let mut head = code(&serialize(&p));
    head = head.concat(&w("11"));
    let x = head.concat(&w("0100100"));
    let y = run(&g, &x).into_output().unwrap();
    assert_eq!(y, head.concat(&code(&w("010010"))).concat(&w("110")));
}

#[test]
fn closure_behaviour() {
    let p = fixtures::identity_on_00();
    let c = prefix_closure(&p);
    assert_eq!(out(&c, "0010").as_deref(), Some("0010"));
    assert_eq!(out(&c, "01"), None);
    let r = fixtures::read_all_then_one();
    let rc = prefix_closure(&r);
    assert_eq!(out(&rc, "0110").as_deref(), Some("10110"));
    let q = PolyBound::new(1, 1).unwrap();
    let wp = fixtures::witness(&w("10"), WitnessKind::ConstHead, &fixtures::witness_tail(), q);
    let wc = prefix_closure(&wp);
    for x in ["0100", "01000010", "010000101", "0100000100100", "11"] {
        assert_eq!(out(&wc, x), out(&wp, x), "{x}");
    }
}
