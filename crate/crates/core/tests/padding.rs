use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rmcalc::fixtures;
use rmcalc::machine::{first_domc, run, Program};
use rmcalc::morphism::pi;
use rmcalc::padding::*;
use rmcalc::word::{encode_tuple, Word};

fn rand_word(rng: &mut ChaCha8Rng, max: usize) -> Word {
    let n = rng.gen_range(0..=max);
    Word::from_bits(&(0..n).map(|_| rng.gen()).collect::<Vec<bool>>())
}

fn programs() -> Vec<(String, Program)> {
    let mut ps = fixtures::witness_family();
    ps.push(("identity".into(), fixtures::identity()));
    ps.push(("identity_on_00".into(), fixtures::identity_on_00()));
    ps.push(("s".into(), fixtures::s_machine()));
    ps
}

/// Inputs in the domain (domain-code word plus random tail) and random
/// words that mostly are not.
fn inputs(p: &Program, rng: &mut ChaCha8Rng) -> Vec<Word> {
    let mut xs: Vec<Word> = first_domc(p, 24, 1 << 16, 6)
        .into_iter()
        .map(|u| u.concat(&rand_word(rng, 6)))
        .collect();
    xs.extend((0..6).map(|_| rand_word(rng, 14)));
    xs
}

#[test]
fn chain_agrees_with_direct_runs() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (name, p) in programs() {
        let chain = lemma_chain(&p);
        let mut defined = 0;
        for x in inputs(&p, &mut rng) {
            let direct = run(&p, &x).into_output();
            defined += direct.is_some() as usize;
            assert_eq!(chain.apply(&x), direct, "{name} on {x}");
        }
        assert!(defined >= 4, "{name}: only {defined} defined samples");
    }
}

#[test]
fn factorized_evaluator_agrees_with_direct() {
    let cfg = EvalConfig::q2();
    let (f, d) = (evr_c(&cfg), evr_c_direct(&cfg));
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (name, p) in programs() {
        let h = pi(&header(&p));
        for x in inputs(&p, &mut rng) {
            let y = h.apply(&x).unwrap();
            assert_eq!(f.apply(&y), d.apply(&y), "{name} on {x}");
        }
    }
}

#[test]
fn padding_round_trip() {
    let p = fixtures::witness(&Word::lit("1"), fixtures::WitnessKind::Identity, &fixtures::witness_tail(), rmcalc::machine::PolyBound::new(2, 2).unwrap());
    let u = Word::lit("010010");
    let x = encode_tuple(&[rmcalc::machine::serialize(&p), u.clone(), Word::lit("1")]).unwrap();
    let e = expand_m().apply(&x).unwrap();
    let back = contr_m().apply(&e).unwrap();
    assert_eq!(back, x);
    let m = chain_depth(p.bound());
    let mut y = e.clone();
    for _ in 0..m {
        y = reexpand_m().apply(&y).unwrap();
    }
    for _ in 0..2 * m {
        y = recontr_m().apply(&y).unwrap();
    }
    assert_eq!(contr_m().apply(&y), Some(x));
}

#[test]
fn q2_bounds_the_ex_transforms() {
    for (name, p) in programs() {
        let e = rmcalc::machine::ex_transform(&p);
        assert!(e.bound().within(&q2()), "{name}: {}", e.bound());
    }
}
