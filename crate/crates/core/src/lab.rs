//! Witnesses and experiments: the witness family and its properties,
//! suffix tracing of generator words, the squaring map `s` and bound
//! certificates.

use std::fmt;

use num_bigint::BigUint;
use regex::Regex;

use crate::fixtures::{self, WitnessKind};
use crate::machine::{check_rm, enumerate_domc, first_domc, is_domc, run_traced, Discipline, PolyBound, Program, Reason, RunOutcome};
use crate::morphism::{compose, pi, rho, Morphism};
use crate::padding::{self, chain_depth, header, EvalConfig};
use crate::word::{code, common_suffix_len, parse_coded_blocks, words_up_to, Word};

/// Identity witness with domain code `{code(a^n) 0010 : n > 0}` and
/// bound `(1,1)`.
pub fn witness_program(a: &Word) -> Program {
    fixtures::witness(a, WitnessKind::Identity, &fixtures::witness_tail(), PolyBound::new(1, 1).unwrap())
}

/// One line of a property report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = if self.passed { "pass" } else { "FAIL" };
        write!(f, "{mark} {}: {}", self.name, self.detail)
    }
}

fn check(name: &str, r: Result<String, String>) -> Check {
    match r {
        Ok(detail) => Check { name: name.to_string(), passed: true, detail },
        Err(detail) => Check { name: name.to_string(), passed: false, detail },
    }
}

/// Node cap for domain-code searches in this module.
const NODES: usize = 1 << 16;

/// Compares the domain of `p` with `(code(a))+ tail A*` on every word of
/// length `<= max_len`. The regular expression decides membership; the
/// words of the language are generated independently to know which
/// prefixes are still alive.
pub fn regex_domain_check(p: &Program, a: &Word, tail: &Word, max_len: u128) -> Result<String, String> {
    let pat = format!("^(?:{})+{}", code(a).bit_string(), tail.bit_string());
    let re = Regex::new(&pat).map_err(|e| e.to_string())?;
    let blk = code(a).len();
    let lang: Vec<Word> = (1..)
        .map(|n| {
            let mut b = crate::word::WordBuilder::new();
            for _ in 0..n {
                b.push_word(&code(a));
            }
            b.push_word(tail);
            b.finish()
        })
        .take_while(|w| w.len() <= max_len + blk + tail.len())
        .filter(|w| re.is_match(&w.bit_string()))
        .collect();
    let mut stack = vec![Word::empty()];
    let mut nodes = 0usize;
    while let Some(x) = stack.pop() {
        nodes += 1;
        let s = x.bit_string();
        let r = run_traced(p, &x, None);
        let n = x.len();
        if re.is_match(&s) {
            if !is_domc(p, &x) && lang.iter().any(|l| l == &x) {
                return Err(format!("{s} matches but is not in the domain code"));
            }
            if r.outcome.output().is_none() {
                return Err(format!("{s} matches but the run is undefined"));
            }
            continue;
        }
        if r.outcome.output().is_some() {
            return Err(format!("{s} does not match but the run is defined"));
        }
        if lang.iter().any(|l| l.starts_with(&x)) {
            if n < max_len {
                stack.push(x.concat(&Word::lit("1")));
                stack.push(x.concat(&Word::lit("0")));
            }
            continue;
        }
        let dead = r.outcome == RunOutcome::Undefined(Reason::HaltedNotQout)
            && r.max_read_before_copy.is_none_or(|m| m <= n);
        if !dead {
            return Err(format!("{s} starts no word of the language but the machine has not rejected it"));
        }
    }
    Ok(format!("{nodes} prefixes decide all words of length <= {max_len}"))
}

/// Properties (1) to (3) of a witness machine, plus the regular
/// expression check. `a` and `tail` describe the intended domain code
/// `{code(a^n) tail}`; `family` plays the role of the finite set the
/// domain code must differ from.
pub fn check_witness_properties(
    p: &Program,
    a: &Word,
    tail: &Word,
    family: &[Program],
    n_max: u64,
) -> Vec<Check> {
    let code_a = code(a);
    let word = |m: u64| {
        let mut b = crate::word::WordBuilder::new();
        for _ in 0..m {
            b.push_word(&code_a);
        }
        b.push_word(tail);
        b.finish()
    };
    let longest = word(n_max + 1).len();
    let domc = enumerate_domc(p, longest, NODES);

    let p1 = match &domc {
        None => Err("domain code search exceeded its node cap".to_string()),
        Some(ws) => match ws.iter().find(|w| w.bit_string().contains("11")) {
            Some(w) => Err(format!("{w} contains 11")),
            None => Ok(format!("{} domain-code words up to length {longest}, none contains 11", ws.len())),
        },
    };

    let p2 = (|| {
        let mine = domc.clone().ok_or("domain code search exceeded its node cap")?;
        for (i, f) in family.iter().enumerate() {
            let theirs = enumerate_domc(f, longest, NODES).ok_or("search exceeded its node cap")?;
            if theirs == mine {
                return Err(format!("member {i} has the same domain code up to length {longest}"));
            }
        }
        Ok(format!("differs from all {} family members", family.len()))
    })();

    let p3 = (|| {
        let mut exhibits = 0;
        for m in 1..=n_max {
            let u = word(m);
            if !is_domc(p, &u) {
                return Err(format!("{u} is not in the domain code"));
            }
            let u0 = u.prefix(u.len() - tail.len());
            if tail.len() > 4 {
                return Err(format!("{u} = code(a^m) c with |c| = {} > 4", tail.len()));
            }
            for n in 1..=n_max {
                let v = word(n + m);
                if !(v.len() > n as u128 && v.starts_with(&u0) && is_domc(p, &v)) {
                    return Err(format!("no branch for u = {u}, n = {n}"));
                }
                exhibits += 1;
            }
        }
        Ok(format!("{exhibits} (u, n) pairs with v = code(a^(n+m)) tail"))
    })();

    let rx = regex_domain_check(p, a, tail, 30);
    vec![
        check("regex", rx),
        check("no-11", p1),
        check("distinct", p2),
        check("branching", p3),
    ]
}

/// A word over generators, leftmost factor applied last.
#[derive(Clone, Debug)]
pub struct GeneratorWord {
    pub letters: Vec<Morphism>,
}

impl GeneratorWord {
    pub fn new(letters: Vec<Morphism>) -> GeneratorWord {
        GeneratorWord { letters }
    }

    pub fn from_morphism(m: &Morphism) -> GeneratorWord {
        GeneratorWord { letters: m.letters() }
    }

    pub fn morphism(&self) -> Option<Morphism> {
        compose(&self.letters).ok()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stage {
    /// Letters applied so far.
    pub applied: usize,
    pub letter: String,
    pub len: u128,
    /// Common suffix of the whole intermediate word with `u`.
    pub suffix: u128,
    /// `(|w1|, |u1|, |u2|, common suffix of u2 with u)` when the word has
    /// the shape `code(w1) 11 code(u1) 11 u2`.
    pub shape: Option<(u128, u128, u128, u128)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuffixTrace {
    pub u_len: u128,
    pub stages: Vec<Stage>,
    /// Index of the letter that was undefined, if any.
    pub undefined_at: Option<usize>,
    pub output: Option<Word>,
}

impl SuffixTrace {
    pub fn min_suffix(&self) -> u128 {
        self.stages.iter().map(|s| s.suffix).min().unwrap_or(self.u_len)
    }

    /// The last stage with the two-block shape.
    pub fn last_shaped(&self) -> Option<&Stage> {
        self.stages.iter().rev().find(|s| s.shape.is_some())
    }
}

impl fmt::Display for SuffixTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "|u| = {}", self.u_len)?;
        writeln!(f, "{:>4}  {:<16} {:>22} {:>8}  shape (|w1|,|u1|,|u2|,suffix)", "i", "letter", "length", "suffix")?;
        for s in &self.stages {
            let shape = s.shape.map_or("-".to_string(), |(a, b, c, d)| format!("({a},{b},{c},{d})"));
            writeln!(f, "{:>4}  {:<16} {:>22} {:>8}  {shape}", s.applied, s.letter, s.len, s.suffix)?;
        }
        if let Some(i) = self.undefined_at {
            writeln!(f, "undefined at letter {i}")?;
        }
        Ok(())
    }
}

/// Applies the letters right to left and measures, after each one, how
/// much of `u` survives at the right end.
pub fn suffix_trace(x: &GeneratorWord, input: &Word, u: &Word) -> SuffixTrace {
    let mut stages = Vec::new();
    let mut cur = input.clone();
    let mut undefined_at = None;
    let shape = |w: &Word| {
        let (bs, rest) = parse_coded_blocks(w, 2)?;
        Some((bs[0].len(), bs[1].len(), rest.len(), common_suffix_len(&rest, u)))
    };
    stages.push(Stage { applied: 0, letter: "input".into(), len: cur.len(), suffix: common_suffix_len(&cur, u), shape: shape(&cur) });
    for (i, l) in x.letters.iter().rev().enumerate() {
        match l.apply(&cur) {
            Some(y) => cur = y,
            None => {
                undefined_at = Some(i + 1);
                break;
            }
        }
        stages.push(Stage {
            applied: i + 1,
            letter: l.to_string().chars().take(16).collect(),
            len: cur.len(),
            suffix: common_suffix_len(&cur, u),
            shape: shape(&cur),
        });
    }
    let output = undefined_at.is_none().then_some(cur);
    SuffixTrace { u_len: u.len(), stages, undefined_at, output }
}

/// A word realizing `γ_w` on the identity witness through the padded
/// evaluator: `contr . recontr^{2m} . evRcc(q2) . reexpand^m . expand . gamma(w)`.
pub fn gamma_chain(p: &Program) -> GeneratorWord {
    let m = chain_depth(p.bound());
    let mut ls = vec![padding::contr_m()];
    ls.extend(std::iter::repeat_with(padding::recontr_m).take(2 * m));
    ls.push(padding::evr_cc(&EvalConfig::q2()));
    ls.extend(std::iter::repeat_with(padding::reexpand_m).take(m));
    ls.push(padding::expand_m());
    ls.push(padding::gamma_w(p));
    GeneratorWord::new(ls)
}

/// `0^n 1 x -> 0^{2n^2} 1 x`.
pub fn s_morphism() -> Morphism {
    Morphism::machine("s", fixtures::s_machine())
}

/// Zero-block length of `s^m(0^n 1)`: `t_0 = n`, `t_i = 2 t_{i-1}^2`.
pub fn s_iterate(m: u32, n: u64) -> BigUint {
    let mut t = BigUint::from(n);
    for _ in 0..m {
        t = BigUint::from(2u32) * &t * &t;
    }
    t
}

/// `2^m n^(2^m)`.
pub fn s_lower_bound(m: u32, n: u64) -> BigUint {
    (BigUint::from(1u32) << m) * BigUint::from(n).pow(1u32 << m)
}

/// Sample pairs `(x, z)` for discipline checks: domain-code words found
/// by search, short words, and all `z` with `|z| <= 2`.
pub fn discipline_samples(p: &Program, max_len: u128) -> Vec<(Word, Word)> {
    let mut xs: Vec<Word> = first_domc(p, max_len, NODES, 12);
    let ext: Vec<Word> = xs.iter().map(|x| x.concat(&Word::lit("01"))).collect();
    xs.extend(ext);
    xs.extend(words_up_to(6));
    let zs: Vec<Word> = words_up_to(2).collect();
    xs.iter().flat_map(|x| zs.iter().map(move |z| (x.clone(), z.clone()))).collect()
}

/// `p` is an RM-program with bound within `q` that passes the dynamic
/// right-ideal checks.
pub fn s2q_certificate(p: &Program, q: &PolyBound) -> bool {
    if p.discipline() != Discipline::Rm || !p.bound().within(q) {
        return false;
    }
    let samples = discipline_samples(p, sample_depth(p));
    check_rm(p, &samples).passed()
}

/// Search depth for domain-code samples: programs whose domain starts with
/// their own header need a deeper search.
fn sample_depth(p: &Program) -> u128 {
    let bits = crate::machine::serialize(p).len();
    (4 * bits + 32).min(1 << 14)
}

/// `rho(H(w)) . evRc(q) . pi(H(w))`.
pub fn direct_simulation(p: &Program, cfg: &EvalConfig) -> Morphism {
    let h = header(p);
    compose(&[rho(&h), padding::evr_c(cfg), pi(&h)]).expect("non-empty")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s_numbers() {
        assert_eq!(s_iterate(2, 2), BigUint::from(128u32));
        for m in 1..=5 {
            for n in 1..=4 {
                assert!(s_iterate(m, n) >= s_lower_bound(m, n));
            }
        }
    }
}
