use proptest::prelude::*;
use rmcalc::fixtures::{self, WitnessKind};
use rmcalc::machine::{deserialize, prefix_closure, run, serialize, PolyBound};
use rmcalc::morphism::{decode2_m, decode_m, pi, rho, Morphism};
use rmcalc::padding::{n_sequence, pad_len};
use rmcalc::word::{code, common_suffix_len, encode_tuple, parse_coded_blocks, parse_coded_prefix, Word, WordBuilder};

fn bits(max: usize) -> impl Strategy<Value = Vec<bool>> {
    prop::collection::vec(any::<bool>(), 0..max)
}

/// Words mixing literal bits with zero runs up to a few hundred.
fn word() -> impl Strategy<Value = Word> {
    prop::collection::vec((0u128..300, bits(6)), 0..5).prop_map(|parts| {
        let mut b = WordBuilder::new();
        for (z, bs) in parts {
            b.push_zeros(z);
            b.push_bits(&bs);
        }
        b.finish()
    })
}

fn short() -> impl Strategy<Value = Word> {
    bits(24).prop_map(|b| Word::from_bits(&b))
}

proptest! {
    #[test]
    fn bits_round_trip(b in bits(200)) {
        let w = Word::from_bits(&b);
        prop_assert_eq!(w.to_bits(), b.clone());
        prop_assert_eq!(w.len(), b.len() as u128);
    }

    #[test]
    fn text_round_trip(w in word()) {
        let s = w.to_string();
        prop_assert_eq!(s.parse::<Word>().unwrap(), w);
    }

    #[test]
    fn split_and_join(w in word(), i in 0u128..2000) {
        let i = i.min(w.len());
        prop_assert_eq!(w.prefix(i).concat(&w.drop_prefix(i)), w.clone());
        prop_assert!(w.starts_with(&w.prefix(i)));
    }

    #[test]
    fn normal_form_is_transparent(w in word()) {
        // equal words built bit by bit compare equal and hash alike
        let v = Word::from_bits(&w.to_bits());
        prop_assert_eq!(&v, &w);
        use std::hash::{BuildHasher, RandomState};
        let s = RandomState::new();
        prop_assert_eq!(s.hash_one(&v), s.hash_one(&w));
    }

    #[test]
    fn coded_prefix_round_trip(u in word(), v in word()) {
        let x = code(&u).concat(&Word::lit("11")).concat(&v);
        prop_assert_eq!(parse_coded_prefix(&x), Some((u, v)));
    }

    #[test]
    fn tuple_round_trip(us in prop::collection::vec(word(), 1..4), v in short()) {
        let x = encode_tuple(&us).unwrap().concat(&v);
        let (got, rest) = parse_coded_blocks(&x, us.len() - 1).unwrap();
        prop_assert_eq!(&got[..], &us[..us.len() - 1]);
        prop_assert_eq!(rest, us[us.len() - 1].concat(&v));
    }

    #[test]
    fn common_suffix_is_symmetric(a in word(), b in word()) {
        let n = common_suffix_len(&a, &b);
        prop_assert_eq!(n, common_suffix_len(&b, &a));
        prop_assert!(n <= a.len().min(b.len()));
        prop_assert_eq!(a.drop_prefix(a.len() - n), b.drop_prefix(b.len() - n));
    }

    #[test]
    fn generators_are_right_ideal(x in short(), z in short(), which in 0usize..6) {
        let fs: [Morphism; 6] = [
            pi(&Word::lit("0")), pi(&Word::lit("10")), rho(&Word::lit("0")), rho(&Word::lit("1")),
            decode_m(), decode2_m(),
        ];
        let f = &fs[which];
        if let Some(y) = f.apply(&x) {
            prop_assert_eq!(f.apply(&x.concat(&z)), Some(y.concat(&z)));
        }
    }

    #[test]
    fn witness_is_right_ideal(a in bits(3), head in any::<bool>(), n in 1usize..6, z in short()) {
        prop_assume!(!a.is_empty());
        let a = Word::from_bits(&a);
        let kind = if head { WitnessKind::ConstHead } else { WitnessKind::Identity };
        let p = fixtures::witness(&a, kind, &fixtures::witness_tail(), PolyBound::new(2, 2).unwrap());
        let mut b = WordBuilder::new();
        for _ in 0..n {
            b.push_word(&code(&a));
        }
        b.push_word(&fixtures::witness_tail());
        let u = b.finish();
        let y = run(&p, &u).into_output().unwrap();
        prop_assert_eq!(y.len(), u.len());
        prop_assert_eq!(run(&p, &u.concat(&z)).into_output(), Some(y.concat(&z)));
        prop_assert_eq!(run(&prefix_closure(&p), &u.concat(&z)).into_output(), run(&p, &u.concat(&z)).into_output());
    }

    #[test]
    fn program_code_round_trip(a in bits(3), head in any::<bool>(), qa in 1u64..5, qk in 1u32..4) {
        prop_assume!(!a.is_empty());
        let kind = if head { WitnessKind::ConstHead } else { WitnessKind::Identity };
        let p = fixtures::witness(&Word::from_bits(&a), kind, &fixtures::witness_tail(), PolyBound::new(qa, qk).unwrap());
        let w = serialize(&p);
        prop_assert_eq!(serialize(&deserialize(&w).unwrap()), w);
    }

    #[test]
    fn pad_len_matches_the_sequence(c in 1u64..1000) {
        let seq = n_sequence(c, 2);
        let n1 = pad_len(c as u128).unwrap();
        prop_assert_eq!(seq[0].to_string(), n1.to_string());
        prop_assert_eq!(seq[1].to_string(), pad_len(n1).unwrap().to_string());
    }

    #[test]
    fn bound_eval_is_monotone(a in 1u64..100, k in 1u32..4, n in 0u128..10_000) {
        let q = PolyBound::new(a, k).unwrap();
        prop_assert!(q.eval(n) <= q.eval(n + 1));
        prop_assert!(q.eval(n) >= n);
    }
}
