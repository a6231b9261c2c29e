use std::sync::Arc;

use rmcalc::fixtures::{self, WitnessKind};
use rmcalc::inversion::*;
use rmcalc::machine::{ex_transform, first_domc, serialize, PolyBound, Program};
use rmcalc::morphism::{identity, pi, rho, Morphism};
use rmcalc::padding::{self, EvalConfig};
use rmcalc::word::{encode_tuple, words_up_to, Word};

fn w(s: &str) -> Word {
    Word::lit(s)
}

fn witness(kind: WitnessKind) -> Program {
    fixtures::witness(&w("1"), kind, &fixtures::witness_tail(), PolyBound::new(1, 1).unwrap())
}

#[test]
fn trivial_inverse_pairs() {
    let xs: Vec<Word> = words_up_to(4).collect();
    let good = check_semigroup_inverse(&pi(&w("0")), &rho(&w("0")), &xs, true);
    assert!(good.passed(), "{:?}", good.violations);
    assert_eq!(good.checked, xs.len());
    let bad = check_semigroup_inverse(&pi(&w("0")), &rho(&w("1")), &xs, false);
    assert_eq!(bad.violations.len(), xs.len());
}

#[test]
fn balanced_restriction_filters_long_outputs() {
    let f = pi(&w("0")).after(&rho(&w("0")));
    let g = restrict_balanced(&identity(), PolyBound::new(1, 1).unwrap());
    for x in words_up_to(5).filter(|x| x.starts_with(&w("0"))) {
        assert_eq!(g.apply(&f.apply(&x).unwrap()), Some(x));
    }
    let long = Morphism::plain("long", |y: &Word| Some(Word::zeros(3 * y.len() + 3)));
    assert_eq!(restrict_balanced(&long, PolyBound::new(1, 1).unwrap()).apply(&w("01")), None);
    assert!(restrict_balanced(&long, PolyBound::new(3, 1).unwrap()).apply(&w("01")).is_some());
}

/// `code(ex(w)) 11 code(0^h 1 p) 11 z`.
fn padded_image(p: &Program, h: u128, img: &Word, z: &Word) -> Word {
    let blk = Word::zeros(h).concat(&w("1")).concat(img);
    encode_tuple(&[serialize(&ex_transform(p)), blk, z.clone()]).unwrap()
}

#[test]
fn reference_oracle() {
    let cfg = EvalConfig::q2();
    let id = witness(WitnessKind::Identity);
    let head = witness(WitnessKind::ConstHead);
    let e = reference_e_prime(&cfg, &[id.clone(), head.clone()]);

    let y = padded_image(&id, 40, &w("01010010"), &w("1"));
    let x = e.call(&y).unwrap();
    assert_eq!(x, y, "the identity witness is its own preimage");
    assert!(e.domain_test(&y));

    // every domain-code word of length 8 maps to 1 0^7; the shortlex first is 01010010
    let y = padded_image(&head, 40, &w("10000000"), &Word::empty());
    assert_eq!(e.call(&y), Some(padded_image(&head, 40, &w("01010010"), &Word::empty())));

    let miss = padded_image(&id, 40, &w("0110"), &Word::empty());
    assert_eq!(e.call(&miss), None);
    assert!(!e.domain_test(&miss));
    assert_eq!((e.calls(), e.domain_tests()), (3, 2));
    assert_eq!(e.log().len(), 5);

    let ev = padding::evr_cc(&cfg);
    let x = padded_image(&head, 40, &w("0101010010"), &w("0"));
    let y = ev.apply(&x).unwrap();
    let back = e.call(&y).unwrap();
    assert_eq!(ev.apply(&back), Some(y));
}

#[test]
fn constructed_inverse() {
    let cfg = EvalConfig::q2();
    let id = witness(WitnessKind::Identity);
    let head = witness(WitnessKind::ConstHead);
    let e = Arc::new(reference_e_prime(&cfg, &[id.clone(), head.clone()]));

    let f = Morphism::machine("id", id.clone());
    let inv = build_inverse(&id, e.clone(), &cfg);
    let x = w("01010010").concat(&w("110"));
    assert_eq!(inv.apply(&x), Some(x.clone()));

    let f_head = Morphism::machine("head", head.clone());
    let inv_head = build_inverse(&head, e.clone(), &cfg);
    let mut moved = 0;
    for u in first_domc(&head, 24, 1 << 16, 6) {
        let x = u.concat(&w("01"));
        let y = f_head.apply(&x).unwrap();
        e.reset();
        let t = inv_head.apply(&y).unwrap();
        assert!(e.domain_tests() as u128 <= u.len() + 1);
        assert_eq!(f_head.apply(&t), Some(y));
        moved += (t != x) as usize;
    }
    assert!(moved > 0, "the constant-head inverse is not a two-sided inverse");
    let xs: Vec<Word> = first_domc(&id, 24, 1 << 16, 4);
    assert!(check_semigroup_inverse(&f, &inv, &xs, true).passed());
    assert_eq!(inv.apply(&w("0110")), None);
}

#[test]
fn regular_factor_inverses() {
    let cfg = EvalConfig::q2();
    let p = witness(WitnessKind::Identity);
    let x = encode_tuple(&[serialize(&p), w("010010"), w("1")]).unwrap();
    let e = padding::e_q(&cfg);
    let y = e.apply(&x).unwrap();
    assert_eq!(invert_e_q(&cfg).apply(&y), Some(x.clone()));
    let wrong = encode_tuple(&[serialize(&p), w("010010"), w("0"), w("1")]).unwrap();
    assert_eq!(invert_e_q(&cfg).apply(&wrong), None);

    let r = padding::rho2_q(&cfg);
    let z = r.apply(&y).unwrap();
    let back = invert_rho2_q(&cfg).apply(&z).unwrap();
    assert_eq!(back, encode_tuple(&[serialize(&p), Word::empty(), w("010010"), w("1")]).unwrap());
    assert_eq!(r.apply(&back), Some(z));
}
