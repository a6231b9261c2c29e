//! Semigroup inverses: balanced restriction, the oracle-driven inverse of
//! a machine map, and explicit inverses of the regular factors.

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use crate::machine::{domc_image, enumerate_domc, serialize, PolyBound, Program};
use crate::morphism::{decode_m, rho, Filter, Morphism, PartialFn};
use crate::padding::{self, admit, chain_depth, header, load, pad_len, EvalConfig};
use crate::word::{code, encode_tuple, parse_coded_blocks, parse_coded_prefix, Word, WordBuilder};

/// One logged oracle query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Query {
    Domain { len: u128, hit: bool },
    Call { len: u128, defined: bool },
}

/// A black-box partial map together with its domain test. Every query is
/// counted and logged.
pub struct OracleInverse {
    call: PartialFn,
    domain: Filter,
    domain_tests: AtomicU64,
    calls: AtomicU64,
    log: Mutex<Vec<Query>>,
}

impl fmt::Debug for OracleInverse {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OracleInverse(domain_tests={}, calls={})", self.domain_tests(), self.calls())
    }
}

impl OracleInverse {
    /// `domain(y)` must hold exactly where `call(y)` is defined.
    pub fn new(
        call: impl Fn(&Word) -> Option<Word> + Send + Sync + 'static,
        domain: impl Fn(&Word) -> bool + Send + Sync + 'static,
    ) -> OracleInverse {
        OracleInverse {
            call: Arc::new(call),
            domain: Arc::new(move |y, _| domain(y)),
            domain_tests: AtomicU64::new(0),
            calls: AtomicU64::new(0),
            log: Mutex::new(Vec::new()),
        }
    }

    pub fn domain_test(&self, y: &Word) -> bool {
        self.domain_tests.fetch_add(1, Ordering::Relaxed);
        let hit = (self.domain)(y, y);
        self.log.lock().unwrap().push(Query::Domain { len: y.len(), hit });
        hit
    }

    pub fn call(&self, y: &Word) -> Option<Word> {
        self.calls.fetch_add(1, Ordering::Relaxed);
        let r = (self.call)(y);
        self.log.lock().unwrap().push(Query::Call { len: y.len(), defined: r.is_some() });
        r
    }

    pub fn domain_tests(&self) -> u64 {
        self.domain_tests.load(Ordering::Relaxed)
    }

    pub fn calls(&self) -> u64 {
        self.calls.load(Ordering::Relaxed)
    }

    pub fn log(&self) -> Vec<Query> {
        self.log.lock().unwrap().clone()
    }

    pub fn reset(&self) {
        self.domain_tests.store(0, Ordering::Relaxed);
        self.calls.store(0, Ordering::Relaxed);
        self.log.lock().unwrap().clear();
    }
}

/// Keeps the points where `f_inv` is balanced by `q` in both directions.
pub fn restrict_balanced(f_inv: &Morphism, q: PolyBound) -> Morphism {
    f_inv.restrict(format!("bal{q}"), false, move |y, x| y.len() <= q.eval(x.len()) && x.len() <= q.eval(y.len()))
}

/// Longest preimage the reference oracle searches for.
pub const PREIMAGE_MAX: u128 = 24;

/// Shortlex-first preimage of each image word over the domain code.
type Preimages = HashMap<Word, Word>;

fn preimages(p: &Program) -> Preimages {
    let mut out = HashMap::new();
    for t in enumerate_domc(p, PREIMAGE_MAX, 1 << 22).unwrap_or_default() {
        if let Some((y, _)) = domc_image(p, &t) {
            out.entry(y).or_insert(t);
        }
    }
    out
}

/// A brute-force inverse of `evRcc(q)` on the padded images of the given
/// programs' `ex`-transforms.
///
/// On `code(ex(w)) 11 code(0^h 1 p) 11 z` it looks for the shortlex-first
/// `t` in the domain code of `w` (length `<= 24`) with `f_w(t) = p` and
/// returns `code(ex(w)) 11 code(0^h 1 t) 11 z`, after checking that
/// `evRcc` maps that back to the query.
pub fn reference_e_prime(cfg: &EvalConfig, programs: &[Program]) -> OracleInverse {
    let cfg = cfg.clone();
    let table: HashMap<Word, (Arc<Program>, Preimages)> = programs
        .iter()
        .map(|p| (serialize(p), (Arc::new(p.clone()), preimages(p))))
        .collect();
    let table = Arc::new(table);
    let memo: Arc<Mutex<HashMap<Word, Option<Word>>>> = Arc::default();
    let ev = padding::evr_cc(&cfg);
    let find = move |y: &Word| -> Option<Word> {
        if let Some(r) = memo.lock().unwrap().get(y) {
            return r.clone();
        }
        let r = (|| {
            let (bs, z) = parse_coded_blocks(y, 2)?;
            let e = admit(&bs[0], &cfg.q)?;
            let inner = serialize(e.wrapped()?);
            let (_, pre) = table.get(&inner)?;
            let h = bs[1].leading_zeros();
            if h == 0 || bs[1].bit_at(h) != Some(true) {
                return None;
            }
            let t = pre.get(&bs[1].drop_prefix(h + 1))?;
            let mut blk = WordBuilder::new();
            blk.push_zeros(h);
            blk.push(true);
            blk.push_word(t);
            let x = encode_tuple(&[bs[0].clone(), blk.finish(), z]).ok()?;
            (ev.apply(&x).as_ref() == Some(y)).then_some(x)
        })();
        memo.lock().unwrap().insert(y.clone(), r.clone());
        r
    };
    let find = Arc::new(find);
    let f2 = find.clone();
    OracleInverse::new(move |y| find(y), move |y| f2(y).is_some())
}

/// `H(ex(w)) 0^N 01 code(p) 11 v`, the padded form of `H(w) code(p) 11 v`
/// after `expand` and `m` rounds of `reexpand`.
fn pad(ex_code: &Word, p: &Word, v: &Word, m: usize) -> Option<Word> {
    let mut n = pad_len(2 * p.len())?;
    for _ in 0..m {
        n = pad_len(n)?;
    }
    let mut b = WordBuilder::new();
    b.push_word(&code(ex_code));
    b.push_bits(&[true, true]);
    b.push_zeros(n);
    b.push_bits(&[false, true]);
    b.push_word(&code(p));
    b.push_bits(&[true, true]);
    b.push_word(v);
    Some(b.finish())
}

/// The oracle inverse `f'` of `f_p`: for `y` it tries the prefixes
/// `p_i` of `y` by increasing length, pads each, asks the oracle whether
/// it is in the domain of `e'`, and on a hit asks for the preimage `t_i`
/// and accepts only if `f_p(t_i) = p_i` by a forward run. The accepted
/// prefix is then inverted with the rest `v` of `y` attached and unpadded:
/// `decode . rho(H(w)) . contr . recontr^{2m} . e'`.
pub fn build_inverse(p: &Program, e_prime: Arc<OracleInverse>, _cfg: &EvalConfig) -> Morphism {
    let m = chain_depth(p.bound());
    let p = Arc::new(p.clone());
    let ex_code = serialize(&crate::machine::ex_transform(&p));
    let unpad = {
        let mut fs = vec![decode_m(), rho(&header(&p)), padding::contr_m()];
        fs.extend(std::iter::repeat_with(padding::recontr_m).take(2 * m));
        crate::morphism::compose(&fs).expect("non-empty")
    };
    Morphism::oracle(format!("inverse[{}]", serialize(&p).len()), move |y| {
        for i in 0..=y.len() {
            let pi = y.prefix(i);
            let probe = pad(&ex_code, &pi, &Word::empty(), m)?;
            if !e_prime.domain_test(&probe) {
                continue;
            }
            let Some(pre) = e_prime.call(&probe) else { continue };
            let (bs, _) = parse_coded_blocks(&pre, 2)?;
            let h = bs[1].leading_zeros();
            let t = bs[1].drop_prefix(h + 1);
            match domc_image(&p, &t) {
                Some((img, _)) if img == pi => {}
                _ => continue,
            }
            let full = pad(&ex_code, &pi, &y.drop_prefix(i), m)?;
            let x = e_prime.call(&full)?;
            return unpad.apply(&x);
        }
        None
    })
}

/// `code(w) 11 code(u) 11 code(y) 11 v -> code(w) 11 code(u) 11 v` when
/// `y = f_w(u)`.
pub fn invert_e_q(cfg: &EvalConfig) -> Morphism {
    let q = cfg.q;
    Morphism::named(format!("Eq'{q}"), move |x| {
        let (bs, v) = parse_coded_blocks(x, 3)?;
        let p = admit(&bs[0], &q)?;
        let (y, _) = domc_image(&p, &bs[1])?;
        (y == bs[2]).then(|| encode_tuple(&[bs[0].clone(), bs[1].clone(), v]).ok())?
    })
}

/// `code(z) 11 code(y) 11 v -> code(z) 11 11 code(y) 11 v`: the dropped
/// block is replaced by the empty word.
pub fn invert_rho2_q(cfg: &EvalConfig) -> Morphism {
    let q = cfg.q;
    Morphism::named(format!("rho2q'{q}"), move |x| {
        let (z, rest) = parse_coded_prefix(x)?;
        let (y, v) = parse_coded_prefix(&rest)?;
        encode_tuple(&[z, Word::empty(), y, v]).ok()
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InverseReport {
    pub checked: usize,
    pub violations: Vec<String>,
}

impl InverseReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn show(w: &Option<Word>) -> String {
    w.as_ref().map_or_else(|| "undefined".to_string(), |w| w.to_string())
}

/// Checks `f f' f = f` at every sample in the domain of `f`. The
/// strengthened mode also checks `f' f f' = f'` on the images and the
/// samples, and both laws for `v = f' f f'`.
pub fn check_semigroup_inverse(f: &Morphism, f_inv: &Morphism, samples: &[Word], strengthened: bool) -> InverseReport {
    let mut rep = InverseReport::default();
    let v = f_inv.after(f).after(f_inv);
    let mut points = Vec::new();
    for x in samples {
        let Some(y) = f.apply(x) else { continue };
        rep.checked += 1;
        let back = f_inv.apply(&y).and_then(|t| f.apply(&t));
        if back.as_ref() != Some(&y) {
            rep.violations.push(format!("f f' f({x}) = {}, expected {y}", show(&back)));
        }
        if strengthened {
            let back = v.apply(&y).and_then(|t| f.apply(&t));
            if back.as_ref() != Some(&y) {
                rep.violations.push(format!("f v f({x}) = {}, expected {y}", show(&back)));
            }
            points.push(y);
        }
    }
    if strengthened {
        points.extend(samples.iter().cloned());
        for s in &points {
            if let Some(t) = f_inv.apply(s) {
                let again = f.apply(&t).and_then(|y| f_inv.apply(&y));
                if again.as_ref() != Some(&t) {
                    rep.violations.push(format!("f' f f'({s}) = {}, expected {t}", show(&again)));
                }
            }
            if let Some(t) = v.apply(s) {
                let again = f.apply(&t).and_then(|y| v.apply(&y));
                if again.as_ref() != Some(&t) {
                    rep.violations.push(format!("v f v({s}) = {}, expected {t}", show(&again)));
                }
            }
        }
    }
    rep
}

/// Whether `y` was produced by a program known to the loader; used to
/// keep the oracle from accepting foreign headers.
pub fn is_program_code(w: &Word) -> bool {
    load(w).is_some()
}
