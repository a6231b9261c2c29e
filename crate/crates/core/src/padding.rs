//! Padding generators, prefix extractors and evaluation maps.
//!
//! Shapes used throughout, with `H(w) = code(w) 11`:
//!
//! ```text
//! expand    H(w) code(u) 11 v               -> H(ex(w)) 0^N 01 code(u) 11 v
//! reexpand  H(ex(z)) 0^k 01 code(u) 11 v     -> H(ex(z)) 0^{4k^2+8k+2} 01 code(u) 11 v
//! recontr   H(ex(z)) (00)^k 01 code(y) 11 v  -> H(ex(z)) (00)^{max(1, isqrt(k)/2 - 1)} 01 code(y) 11 v
//! contr     H(ex(z)) (00)^k 01 code(y) 11 v  -> H(z) code(y) 11 v
//! evRcc     H(w) code(u) 11 v                -> H(w) code(f_w(u)) 11 v
//! ```
//!
//! Padding blocks are zero runs and are never expanded.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigUint;

use crate::machine::{
    deserialize, domain_prefix, domc_image, ex_transform, run, serialize, Discipline, PolyBound, Program,
};
use crate::morphism::{compose, decode2_m, rho, Morphism};
use crate::word::{code, encode_tuple, parse_coded_blocks, parse_coded_prefix, Word, WordBuilder};

/// Simulated step totals, collected when metering is on.
#[derive(Debug, Default)]
pub struct StepMeter {
    runs: AtomicU64,
    steps: AtomicU64,
}

impl StepMeter {
    pub fn runs(&self) -> u64 {
        self.runs.load(Ordering::Relaxed)
    }

    /// Saturates at `u64::MAX`.
    pub fn steps(&self) -> u64 {
        self.steps.load(Ordering::Relaxed)
    }

    fn record(&self, steps: u128) {
        self.runs.fetch_add(1, Ordering::Relaxed);
        let s = u64::try_from(steps).unwrap_or(u64::MAX);
        let _ = self.steps.fetch_update(Ordering::Relaxed, Ordering::Relaxed, |v| Some(v.saturating_add(s)));
    }
}

#[derive(Clone, Debug)]
pub struct EvalConfig {
    pub q: PolyBound,
    pub meter: Option<Arc<StepMeter>>,
}

impl EvalConfig {
    pub fn new(q: PolyBound) -> EvalConfig {
        EvalConfig { q, meter: None }
    }

    /// `q2(n) = 12 n^2 + 12`.
    pub fn q2() -> EvalConfig {
        EvalConfig::new(q2())
    }

    pub fn metered(mut self) -> EvalConfig {
        self.meter = Some(Arc::new(StepMeter::default()));
        self
    }

    fn record(&self, steps: u128) {
        if let Some(m) = &self.meter {
            m.record(steps);
        }
    }
}

pub fn q2() -> PolyBound {
    PolyBound::new(12, 2).expect("positive")
}

type Cache = Mutex<HashMap<Word, Option<Arc<Program>>>>;

/// Decodes a program code, memoized.
pub fn load(w: &Word) -> Option<Arc<Program>> {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.lock().unwrap().get(w) {
        return p.clone();
    }
    let p = deserialize(w).ok().map(Arc::new);
    cache.lock().unwrap().insert(w.clone(), p.clone());
    p
}

/// `serialize(ex(p))`, memoized by the code of `p`.
fn ex_code(w: &Word, p: &Program) -> Word {
    static CACHE: OnceLock<Mutex<HashMap<Word, Word>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(e) = cache.lock().unwrap().get(w) {
        return e.clone();
    }
    let e = serialize(&ex_transform(p));
    cache.lock().unwrap().insert(w.clone(), e.clone());
    e
}

/// The program coded by `w` if it is an RM-program with bound within `q`.
pub fn admit(w: &Word, q: &PolyBound) -> Option<Arc<Program>> {
    let p = load(w)?;
    (p.discipline() == Discipline::Rm && p.bound().within(q)).then_some(p)
}

/// `code(w) 11`.
pub fn header(p: &Program) -> Word {
    let mut b = WordBuilder::new();
    b.push_word(&code(&serialize(p)));
    b.push_bits(&[true, true]);
    b.finish()
}

/// `4k^2 + 8k + 2`, `None` on overflow.
pub fn pad_len(k: u128) -> Option<u128> {
    k.checked_mul(k)?.checked_mul(4)?.checked_add(k.checked_mul(8)?)?.checked_add(2)
}

/// The recontraction exponent `max(1, floor(sqrt(k)/2) - 1)`.
pub fn recontr_exp(k: u128) -> u128 {
    ((k.isqrt() / 2).saturating_sub(1)).max(1)
}

/// Splits `H(e) 0^z 1 rest` with `e` the image of some program under
/// `ex`, returning `(code of e, e, z, rest)`.
fn split_padded(x: &Word) -> Option<(Word, Arc<Program>, u128, Word)> {
    let (e, rest) = parse_coded_prefix(x)?;
    let p = load(&e)?;
    p.wrapped()?;
    let z = rest.leading_zeros();
    if rest.bit_at(z) != Some(true) {
        return None;
    }
    let after = rest.drop_prefix(z + 1);
    Some((e, p, z, after))
}

fn padded(e: &Word, zeros: u128, tail: &Word) -> Word {
    let mut b = WordBuilder::new();
    b.push_word(&code(e));
    b.push_bits(&[true, true]);
    b.push_zeros(zeros);
    b.push_bits(&[false, true]);
    b.push_word(tail);
    b.finish()
}

pub fn expand_m() -> Morphism {
    Morphism::named("expand", |x| {
        let (bs, v) = parse_coded_blocks(x, 2)?;
        let p = load(&bs[0])?;
        if p.discipline() != Discipline::Rm {
            return None;
        }
        domc_image(&p, &bs[1])?;
        let c = 2 * bs[1].len();
        let n = pad_len(c)?;
        let e = ex_code(&bs[0], &p);
        let mut tail = WordBuilder::new();
        tail.push_word(&code(&bs[1]));
        tail.push_bits(&[true, true]);
        tail.push_word(&v);
        Some(padded(&e, n, &tail.finish()))
    })
}

pub fn reexpand_m() -> Morphism {
    Morphism::named("reexpand", |x| {
        let (e, _, z, after) = split_padded(x)?;
        // z = k + 1 zeros for a block 0^k 01
        let k = z.checked_sub(1).filter(|&k| k > 0)?;
        parse_coded_prefix(&after)?;
        Some(padded(&e, pad_len(k)?, &after))
    })
}

pub fn recontr_m() -> Morphism {
    Morphism::named("recontr", |x| {
        let (e, _, z, after) = split_padded(x)?;
        if z < 3 || z % 2 == 0 {
            return None;
        }
        parse_coded_prefix(&after)?;
        Some(padded(&e, 2 * recontr_exp(z / 2), &after))
    })
}

pub fn contr_m() -> Morphism {
    Morphism::named("contr", |x| {
        let (_, p, z, after) = split_padded(x)?;
        if z < 3 || z % 2 == 0 {
            return None;
        }
        let (y, v) = parse_coded_prefix(&after)?;
        let c = 2 * y.len();
        if z - 1 > pad_len(c)? {
            return None;
        }
        let inner = p.wrapped()?;
        encode_tuple(&[serialize(inner), y, v]).ok()
    })
}

fn extract(p: &Program, w: &Word, x: &Word) -> Option<Word> {
    let l = domain_prefix(p, x)?;
    encode_tuple(&[w.clone(), x.prefix(l), x.drop_prefix(l)]).ok()
}

/// `u v -> code(w) 11 code(u) 11 v` with `u` the domain-code prefix.
pub fn gamma_o_w(p: &Program) -> Morphism {
    let p = Arc::new(p.clone());
    let w = serialize(&p);
    Morphism::named("gammao", move |x| extract(&p, &w, x))
}

/// `code(w) 11 u v -> code(w) 11 code(u) 11 v`.
pub fn gamma_w(p: &Program) -> Morphism {
    let p = Arc::new(p.clone());
    let w = serialize(&p);
    let h = header(&p);
    Morphism::named("gamma", move |x| extract(&p, &w, &x.strip_prefix(&h)?))
}

/// `γ_w` for every admitted `w`.
pub fn gamma_q(cfg: &EvalConfig) -> Morphism {
    let q = cfg.q;
    Morphism::named(format!("gammaq{q}"), move |x| {
        let (w, rest) = parse_coded_prefix(x)?;
        let p = admit(&w, &q)?;
        extract(&p, &w, &rest)
    })
}

/// Admission, then `f_w(u)` for `u` in the domain code.
fn eval_cc(cfg: &EvalConfig, w: &Word, u: &Word) -> Option<Word> {
    let p = admit(w, &cfg.q)?;
    let (y, steps) = domc_image(&p, u)?;
    cfg.record(steps);
    Some(y)
}

pub fn evr_cc(cfg: &EvalConfig) -> Morphism {
    let cfg = cfg.clone();
    Morphism::named(format!("evRcc{}", cfg.q), move |x| {
        let (bs, v) = parse_coded_blocks(x, 2)?;
        let y = eval_cc(&cfg, &bs[0], &bs[1])?;
        encode_tuple(&[bs[0].clone(), y, v]).ok()
    })
}

/// `code(w) 11 x -> code(w) 11 f_w(x)`, as `decode2 ∘ evRcc ∘ γ_q`.
pub fn evr_c(cfg: &EvalConfig) -> Morphism {
    compose(&[decode2_m(), evr_cc(cfg), gamma_q(cfg)]).expect("non-empty")
}

/// The same map evaluated by one run of the coded program.
pub fn evr_c_direct(cfg: &EvalConfig) -> Morphism {
    let cfg = cfg.clone();
    Morphism::named(format!("evRc{}", cfg.q), move |x| {
        let (w, rest) = parse_coded_prefix(x)?;
        let p = admit(&w, &cfg.q)?;
        let y = run(&p, &rest).into_output()?;
        encode_tuple(&[w, y]).ok()
    })
}

/// `code(w) 11 code(u) 11 v -> code(w) 11 code(u) 11 code(f_w(u)) 11 v`.
pub fn e_q(cfg: &EvalConfig) -> Morphism {
    let cfg = cfg.clone();
    Morphism::named(format!("Eq{}", cfg.q), move |x| {
        let (bs, v) = parse_coded_blocks(x, 2)?;
        let y = eval_cc(&cfg, &bs[0], &bs[1])?;
        encode_tuple(&[bs[0].clone(), bs[1].clone(), y, v]).ok()
    })
}

/// `code(z) 11 code(x) 11 code(y) 11 v -> code(z) 11 code(y) 11 v` when
/// `|x| <= q(|y|)`.
pub fn rho2_q(cfg: &EvalConfig) -> Morphism {
    let q = cfg.q;
    Morphism::named(format!("rho2q{q}"), move |x| {
        let (bs, v) = parse_coded_blocks(x, 3)?;
        if bs[1].len() > q.eval(bs[2].len()) {
            return None;
        }
        encode_tuple(&[bs[0].clone(), bs[2].clone(), v]).ok()
    })
}

/// `ceil(log2(a + k))`.
pub fn chain_depth(q: PolyBound) -> usize {
    let s = q.a() as u128 + q.k() as u128;
    (128 - (s - 1).leading_zeros()) as usize
}

/// The padded evaluation chain of `p`:
/// `rho(H(w)) . decode2 . contr . recontr^{2m} . evRcc(q2) . reexpand^m . expand . gammao(w)`.
pub fn lemma_chain(p: &Program) -> Morphism {
    let m = chain_depth(p.bound());
    compose(&chain_letters(p, m)).expect("non-empty")
}

/// The chain's factors, leftmost first.
pub fn chain_letters(p: &Program, m: usize) -> Vec<Morphism> {
    let mut fs = vec![rho(&header(p)), decode2_m(), contr_m()];
    fs.extend(std::iter::repeat_with(recontr_m).take(2 * m));
    fs.push(evr_cc(&EvalConfig::q2()));
    fs.extend(std::iter::repeat_with(reexpand_m).take(m));
    fs.push(expand_m());
    fs.push(gamma_o_w(p));
    fs
}

/// `N_1 .. N_i` for `N_1 = 4c^2 + 8c + 2`, `N_j = 4 N_{j-1}^2 + 8 N_{j-1} + 2`.
pub fn n_sequence(c: u64, i: usize) -> Vec<BigUint> {
    let mut out = Vec::with_capacity(i);
    let mut prev = BigUint::from(c);
    for _ in 0..i {
        let next = BigUint::from(4u32) * &prev * &prev + BigUint::from(8u32) * &prev + BigUint::from(2u32);
        out.push(next.clone());
        prev = next;
    }
    out
}

/// `|0^{N_j} 01| = (2 (N_{j-1} + 1))^2` along the sequence, with
/// `N_0 = c`.
pub fn n_sequence_square_identity(c: u64, i: usize) -> bool {
    let seq = n_sequence(c, i);
    let mut prev = BigUint::from(c);
    for n in seq {
        let lhs = &n + BigUint::from(2u32);
        let t = BigUint::from(2u32) * (&prev + BigUint::from(1u32));
        if lhs != &t * &t {
            return false;
        }
        prev = n;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formulas() {
        assert_eq!(pad_len(2), Some(34));
        assert_eq!(pad_len(4), Some(98));
        assert_eq!(pad_len(34), Some(4898));
        assert_eq!(pad_len(1), Some(14));
        assert_eq!(recontr_exp(100), 4);
        assert_eq!(recontr_exp(9), 1);
        assert_eq!(recontr_exp(1), 1);
        assert_eq!(chain_depth(PolyBound::new(1, 1).unwrap()), 1);
        assert_eq!(chain_depth(PolyBound::new(2, 1).unwrap()), 2);
        assert_eq!(chain_depth(PolyBound::new(2, 2).unwrap()), 2);
        let s = n_sequence(2, 2);
        assert_eq!(s[0], BigUint::from(34u32));
        assert_eq!(s[1], BigUint::from(4898u32));
        assert!(n_sequence_square_identity(2, 4));
    }
}
