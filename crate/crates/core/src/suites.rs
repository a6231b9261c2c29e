//! The named identity suites. Each suite checks one law bit-exactly on
//! fixtures and sampled inputs and reports a single verdict.

use std::fmt;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::fixtures::{self, WitnessKind};
use crate::inversion::{
    build_inverse, check_semigroup_inverse, invert_e_q, invert_rho2_q, reference_e_prime, restrict_balanced,
};
use crate::lab::{
    check_witness_properties, direct_simulation, gamma_chain, regex_domain_check, s_iterate, s_lower_bound,
    s_morphism, suffix_trace, witness_program, GeneratorWord,
};
use crate::machine::{first_domc, prefix_closure, run, run_traced, PolyBound, Program, Reason, RunOutcome};
use crate::morphism::{c_embed, compose, decode2_m, decode_m, identity, pi, rho, Morphism};
use crate::padding::{self, header, n_sequence, n_sequence_square_identity, pad_len, EvalConfig};
use crate::word::{encode_tuple, words_up_to, Word};

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    /// Sampled inputs per fixture.
    pub samples: usize,
    /// Worker threads; `None` uses the global pool.
    pub parallel: Option<usize>,
    pub seed: u64,
}

impl Default for SuiteOptions {
    fn default() -> SuiteOptions {
        SuiteOptions { samples: 50, parallel: None, seed: 2024 }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub name: &'static str,
    pub criterion: u8,
    pub passed: bool,
    pub summary: String,
    /// Failures, or notable facts for a passing suite.
    pub details: Vec<String>,
    pub elapsed: Duration,
}

impl SuiteReport {
    /// The one-line verdict, without timing.
    pub fn line(&self) -> String {
        let mark = if self.passed { "PASS" } else { "FAIL" };
        format!("{mark} {:>2} {}: {}", self.criterion, self.name, self.summary)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.line())?;
        for d in &self.details {
            writeln!(f, "    {d}")?;
        }
        Ok(())
    }
}

type SuiteFn = fn(&SuiteOptions) -> Outcome;

struct Outcome {
    passed: bool,
    summary: String,
    details: Vec<String>,
}

impl Outcome {
    fn from_failures(summary: String, failures: Vec<String>) -> Outcome {
        Outcome { passed: failures.is_empty(), summary, details: failures.into_iter().take(20).collect() }
    }
}

/// Suite names in criterion order.
const SUITES: [(&str, SuiteFn); 12] = [
    ("star-identity", star_identity),
    ("factorization", factorization),
    ("regular-factorization", regular_factorization),
    ("right-ideal", right_ideal),
    ("balanced-inverse", balanced_inverse),
    ("inverse-construction", inverse_construction),
    ("witness-family", witness_family),
    ("suffix-tracer", suffix_tracer),
    ("s-growth", s_growth),
    ("n-sequence", n_seq),
    ("budget", budget),
    ("fpref", fpref),
];

pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|(n, _)| *n).collect()
}

/// Runs one suite by name.
pub fn run_suite(name: &str, opts: &SuiteOptions) -> Option<SuiteReport> {
    let (i, (name, f)) = SUITES.iter().enumerate().find(|(_, (n, _))| *n == name)?;
    let start = Instant::now();
    let out = match opts.parallel {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .expect("thread pool")
            .install(|| f(opts)),
        None => f(opts),
    };
    Some(SuiteReport {
        name,
        criterion: i as u8 + 1,
        passed: out.passed,
        summary: out.summary,
        details: out.details,
        elapsed: start.elapsed(),
    })
}

pub fn run_all(opts: &SuiteOptions) -> Vec<SuiteReport> {
    SUITES.iter().map(|(n, _)| run_suite(n, opts).expect("listed")).collect()
}

const NODES: usize = 1 << 16;

fn rng(opts: &SuiteOptions, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(opts.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

fn random_word(rng: &mut ChaCha8Rng, max: u128) -> Word {
    let n = rng.gen_range(0..=max as usize);
    Word::from_bits(&(0..n).map(|_| rng.gen()).collect::<Vec<bool>>())
}

/// `n` inputs of length `<= max_len`: the first half extends domain-code
/// words by random tails, the rest are random words.
pub fn sample_inputs(p: &Program, n: usize, max_len: u128, rng: &mut ChaCha8Rng) -> Vec<Word> {
    let us = first_domc(p, max_len.min(36), NODES, 16);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        if i < n / 2 && !us.is_empty() {
            let u = &us[i % us.len()];
            out.push(u.concat(&random_word(rng, max_len - u.len())));
        } else {
            out.push(random_word(rng, max_len));
        }
    }
    out
}

fn witness_fixtures() -> Vec<(String, Program)> {
    fixtures::witness_family()
}

fn show(w: &Option<Word>) -> String {
    w.as_ref().map_or_else(|| "undefined".to_string(), |w| w.to_string())
}

fn star_identity(opts: &SuiteOptions) -> Outcome {
    let fx = witness_fixtures();
    let cfg = EvalConfig::q2();
    let jobs: Vec<(String, Program, Word)> = fx
        .iter()
        .enumerate()
        .flat_map(|(i, (n, p))| {
            let mut r = rng(opts, 1 + i as u64);
            sample_inputs(p, opts.samples, 40, &mut r).into_iter().map(move |x| (n.clone(), p.clone(), x))
        })
        .collect();
    let results: Vec<(bool, Option<String>)> = jobs
        .par_iter()
        .map(|(n, p, x)| {
            let direct = run(p, x).into_output();
            let chain = padding::lemma_chain(p).apply(x);
            let sim = direct_simulation(p, &cfg).apply(x);
            let bad = (chain != direct || sim != direct).then(|| {
                format!("{n} on {x}: run {}, chain {}, direct simulation {}", show(&direct), show(&chain), show(&sim))
            });
            (direct.is_some(), bad)
        })
        .collect();
    let defined = results.iter().filter(|r| r.0).count();
    let failures: Vec<String> = results.into_iter().filter_map(|r| r.1).collect();
    Outcome::from_failures(
        format!(
            "{} programs x {} inputs, {defined} defined, chain = direct simulation = run on all",
            fx.len(),
            opts.samples
        ),
        failures,
    )
}

/// `(p, H(p) x)` for the witness fixtures and sampled `x`.
fn headed_inputs(opts: &SuiteOptions, salt: u64) -> Vec<(String, Program, Word)> {
    witness_fixtures()
        .into_iter()
        .enumerate()
        .flat_map(|(i, (n, p))| {
            let mut r = rng(opts, salt + i as u64);
            let h = header(&p);
            sample_inputs(&p, opts.samples, 40, &mut r)
                .into_iter()
                .map(|x| (n.clone(), p.clone(), h.concat(&x)))
                .collect::<Vec<_>>()
        })
        .collect()
}

fn factorization(opts: &SuiteOptions) -> Outcome {
    let cfg = EvalConfig::q2();
    let (f, d) = (padding::evr_c(&cfg), padding::evr_c_direct(&cfg));
    let jobs = headed_inputs(opts, 100);
    let failures: Vec<String> = jobs
        .par_iter()
        .filter_map(|(n, _, x)| {
            let (a, b) = (f.apply(x), d.apply(x));
            (a != b).then(|| format!("{n} on {x}: factorized {}, direct {}", show(&a), show(&b)))
        })
        .collect();
    let defined = jobs.iter().filter(|(_, _, x)| d.apply(x).is_some()).count();
    Outcome::from_failures(
        format!("decode2 . evRcc . gammaq = evRc on {} points, {defined} defined", jobs.len()),
        failures,
    )
}

fn regular_factorization(opts: &SuiteOptions) -> Outcome {
    let cfg = EvalConfig::q2();
    let (eq, r2) = (padding::e_q(&cfg), padding::rho2_q(&cfg));
    let evcc = padding::evr_cc(&cfg);
    let gq = padding::gamma_q(&cfg);
    let fact = compose(&[decode2_m(), r2.clone(), eq.clone(), gq.clone()]).expect("non-empty");
    let direct = padding::evr_c_direct(&cfg);
    let jobs = headed_inputs(opts, 200);
    let mut failures: Vec<String> = jobs
        .par_iter()
        .filter_map(|(n, _, x)| {
            let a = fact.apply(x);
            let b = direct.apply(x);
            if a != b {
                return Some(format!("{n} on {x}: decode2 . rho2q . Eq . gammaq {}, evRc {}", show(&a), show(&b)));
            }
            let g = gq.apply(x)?;
            let (c, d) = (r2.after(&eq).apply(&g), evcc.apply(&g));
            (c != d).then(|| format!("{n} at {g}: rho2q . Eq {}, evRcc {}", show(&c), show(&d)))
        })
        .collect();
    let gs: Vec<Word> = jobs.iter().filter_map(|(_, _, x)| gq.apply(x)).collect();
    let es: Vec<Word> = gs.iter().filter_map(|g| eq.apply(g)).collect();
    let mut pts_e = gs.clone();
    pts_e.extend(es.iter().take(10).cloned());
    let mut pts_r = es.clone();
    pts_r.extend(gs.iter().take(10).cloned());
    let re = check_semigroup_inverse(&eq, &invert_e_q(&cfg), &pts_e, true);
    let rr = check_semigroup_inverse(&r2, &invert_rho2_q(&cfg), &pts_r, true);
    failures.extend(re.violations.iter().map(|v| format!("Eq: {v}")));
    failures.extend(rr.violations.iter().map(|v| format!("rho2q: {v}")));
    if re.checked == 0 || rr.checked == 0 {
        failures.push("no defined points for the inverse laws".into());
    }
    Outcome::from_failures(
        format!(
            "evRc = decode2 . rho2q . Eq . gammaq on {} points; strengthened inverse laws on {} Eq and {} rho2q points",
            jobs.len(),
            re.checked,
            rr.checked
        ),
        failures,
    )
}

/// Every morphism value the crate constructs, by name.
pub fn morphism_zoo() -> Vec<Morphism> {
    let cfg = EvalConfig::q2();
    let w1 = witness_program(&Word::lit("1"));
    let head = fixtures::witness(&Word::lit("10"), WitnessKind::ConstHead, &fixtures::witness_tail(), PolyBound::new(2, 2).unwrap());
    let rev = Morphism::plain("rev", |x: &Word| {
        let mut b = x.to_bits();
        b.reverse();
        Some(Word::from_bits(&b))
    });
    vec![
        identity(),
        pi(&Word::lit("0")),
        pi(&Word::lit("1")),
        rho(&Word::lit("0")),
        rho(&Word::lit("1")),
        decode_m(),
        decode2_m(),
        c_embed(&rev),
        padding::expand_m(),
        padding::reexpand_m(),
        padding::recontr_m(),
        padding::contr_m(),
        padding::evr_cc(&cfg),
        padding::evr_c(&cfg),
        padding::evr_c_direct(&cfg),
        padding::gamma_q(&cfg),
        padding::e_q(&cfg),
        padding::rho2_q(&cfg),
        invert_e_q(&cfg),
        invert_rho2_q(&cfg),
        padding::gamma_o_w(&w1),
        padding::gamma_w(&w1),
        padding::lemma_chain(&w1),
        direct_simulation(&w1, &cfg),
        Morphism::machine("identity", fixtures::identity()),
        Morphism::machine("identity_on_00", fixtures::identity_on_00()),
        Morphism::machine("witness-1", w1.clone()),
        Morphism::machine("witness-head-10", head.clone()),
        Morphism::machine("gamma-program", crate::machine::gamma_program(&w1)),
        Morphism::machine("closure(read_all_then_one)", prefix_closure(&fixtures::read_all_then_one())),
        s_morphism(),
        padding::lemma_chain(&fixtures::s_machine()),
    ]
}

/// Candidate inputs: random words, headed witness inputs, and every
/// intermediate of the evaluation chains on them.
fn candidate_pool(opts: &SuiteOptions) -> Vec<Word> {
    let mut r = rng(opts, 300);
    let mut pool: Vec<Word> = (0..opts.samples).map(|_| random_word(&mut r, 64)).collect();
    let progs = [
        witness_program(&Word::lit("1")),
        fixtures::witness(&Word::lit("10"), WitnessKind::ConstHead, &fixtures::witness_tail(), PolyBound::new(2, 2).unwrap()),
        fixtures::s_machine(),
        fixtures::identity_on_00(),
    ];
    for p in &progs {
        for u in first_domc(p, 30, NODES, 6) {
            pool.push(u.clone());
            pool.push(u.concat(&Word::lit("0110")));
            let x = header(p).concat(&u);
            let letters = padding::chain_letters(p, padding::chain_depth(p.bound()));
            let mut cur = u.clone();
            for l in letters.iter().rev() {
                match l.apply(&cur) {
                    Some(y) => {
                        pool.push(y.clone());
                        cur = y;
                    }
                    None => break,
                }
            }
            pool.push(x.clone());
            let cfg = EvalConfig::q2();
            if let Some(g) = padding::gamma_q(&cfg).apply(&x) {
                if let Some(e) = padding::e_q(&cfg).apply(&g) {
                    pool.push(e);
                }
                pool.push(g);
            }
        }
    }
    let mut sr = rng(opts, 301);
    pool.extend((1..=6u128).map(|n| Word::zeros(n).concat(&Word::lit("1")).concat(&random_word(&mut sr, 8))));
    pool.push(Word::lit("0001110011"));
    pool.push(encode_tuple(&[Word::lit("01"), Word::lit("1")]).unwrap());
    pool.push(encode_tuple(&[Word::lit("01"), Word::lit("1"), Word::lit("0")]).unwrap());
    pool
}

fn right_ideal(opts: &SuiteOptions) -> Outcome {
    let zoo = morphism_zoo();
    let pool = candidate_pool(opts);
    let zs: Vec<Word> = words_up_to(3).collect();
    let per: Vec<(String, usize, Vec<String>)> = zoo
        .par_iter()
        .map(|f| {
            let mut checked = 0;
            let mut bad = Vec::new();
            for x in &pool {
                if checked >= opts.samples {
                    break;
                }
                let Some(fx) = f.apply(x) else { continue };
                checked += 1;
                for z in &zs {
                    let l = f.apply(&x.concat(z));
                    if l.as_ref() != Some(&fx.concat(z)) {
                        bad.push(format!("{f}: f({x} . {z}) = {}, f(x) z = {}", show(&l), fx.concat(z)));
                    }
                }
            }
            (f.to_string(), checked, bad)
        })
        .collect();
    let mut failures = Vec::new();
    for (name, checked, bad) in &per {
        if *checked == 0 {
            failures.push(format!("{name}: no sampled point in the domain"));
        }
        failures.extend(bad.iter().take(3).cloned());
    }
    let total: usize = per.iter().map(|p| p.1).sum();
    Outcome::from_failures(
        format!("{} morphisms, {total} domain points, {} right factors each", zoo.len(), zs.len()),
        failures,
    )
}

struct Triple {
    name: &'static str,
    f: Morphism,
    f_inv: Morphism,
    q: PolyBound,
    dom: Vec<Word>,
    /// Whether some sampled point must be filtered out.
    expect_filtered: bool,
}

fn triples(opts: &SuiteOptions) -> Vec<Triple> {
    let mut r = rng(opts, 400);
    let mut randoms = |n: usize, max: u128| -> Vec<Word> { (0..n).map(|_| random_word(&mut r, max)).collect() };

    let zero_id = compose(&[pi(&Word::lit("0")), rho(&Word::lit("0"))]).unwrap();
    let dom0: Vec<Word> = randoms(opts.samples, 20).into_iter().map(|x| Word::lit("0").concat(&x)).collect();

    let head = fixtures::witness(&Word::lit("1"), WitnessKind::ConstHead, &fixtures::witness_tail(), PolyBound::new(1, 1).unwrap());
    let head_f = Morphism::machine("witness-head-1", head.clone());
    let us = first_domc(&head, 24, NODES, 8);
    let dom_head: Vec<Word> = randoms(opts.samples, 8).into_iter().enumerate().map(|(i, z)| us[i % us.len()].concat(&z)).collect();
    // shortlex preimages of the images of the domain code, else far too long
    let table: Vec<(Word, Word)> = us.iter().filter_map(|u| Some((run(&head, u).into_output()?, u.clone()))).collect();
    let head_inv = Morphism::plain("head'", move |y| {
        for (img, u) in &table {
            if let Some(v) = y.strip_prefix(img) {
                return Some(u.concat(&v));
            }
        }
        Some(Word::zeros(2 * y.len() + 2))
    });

    let s_inv = Morphism::plain("s'", |y| {
        let m = y.leading_zeros();
        let v = y.drop_prefix(m + 1);
        if y.bit_at(m) == Some(true) && m % 2 == 0 {
            let n = (m / 2).isqrt();
            if 2 * n * n == m {
                return Some(Word::zeros(n).concat(&Word::lit("1")).concat(&v));
            }
        }
        Some(Word::zeros(5 * y.len() * y.len() + 5))
    });
    let dom_s: Vec<Word> = randoms(opts.samples, 6)
        .into_iter()
        .enumerate()
        .map(|(i, v)| Word::zeros((i % 7) as u128).concat(&Word::lit("1")).concat(&v))
        .collect();

    vec![
        Triple { name: "identity on 0A*", f: zero_id, f_inv: identity(), q: PolyBound::new(1, 1).unwrap(), dom: dom0, expect_filtered: false },
        Triple { name: "constant-head witness", f: head_f, f_inv: head_inv, q: PolyBound::new(1, 1).unwrap(), dom: dom_head, expect_filtered: true },
        Triple { name: "s", f: s_morphism(), f_inv: s_inv, q: PolyBound::new(4, 2).unwrap(), dom: dom_s, expect_filtered: true },
    ]
}

fn balanced_inverse(opts: &SuiteOptions) -> Outcome {
    let mut failures = Vec::new();
    let mut notes = Vec::new();
    let mut r = rng(opts, 401);
    for t in triples(opts) {
        let g = restrict_balanced(&t.f_inv, t.q);
        let rep = check_semigroup_inverse(&t.f, &g, &t.dom, false);
        failures.extend(rep.violations.iter().map(|v| format!("{}: {v}", t.name)));
        if rep.checked == 0 {
            failures.push(format!("{}: no sample in the domain", t.name));
        }
        let images: Vec<Word> = t.dom.iter().filter_map(|x| t.f.apply(x)).collect();
        for y in &images {
            if g.apply(y).is_none() {
                failures.push(format!("{}: image point {y} was filtered out", t.name));
            }
        }
        let mut ys = images.clone();
        ys.extend((0..t.dom.len()).map(|_| random_word(&mut r, 24)));
        let mut filtered = 0;
        for y in &ys {
            match g.apply(y) {
                Some(x) => {
                    if !(y.len() <= t.q.eval(x.len()) && x.len() <= t.q.eval(y.len())) {
                        failures.push(format!("{}: unbalanced pair {y} -> {x}", t.name));
                    }
                }
                None => filtered += (t.f_inv.apply(y).is_some()) as usize,
            }
        }
        if t.expect_filtered && filtered == 0 {
            failures.push(format!("{}: the filter removed nothing", t.name));
        }
        notes.push(format!("{}: {} inverse checks, {filtered} of {} points filtered", t.name, rep.checked, ys.len()));
    }
    let mut out = Outcome::from_failures(notes.join("; "), failures);
    if out.passed {
        out.details = notes;
    }
    out
}

fn inverse_construction(opts: &SuiteOptions) -> Outcome {
    let cfg = EvalConfig::q2();
    let fx = witness_fixtures();
    let progs: Vec<Program> = fx.iter().map(|(_, p)| p.clone()).collect();
    let n = opts.samples.max(20);
    let results: Vec<(Vec<String>, String, bool)> = fx
        .par_iter()
        .enumerate()
        .map(|(i, (name, p))| {
            let e = Arc::new(reference_e_prime(&cfg, &progs));
            let inv = build_inverse(p, e.clone(), &cfg);
            let f = Morphism::machine(name.clone(), p.clone());
            let us = first_domc(p, 24, NODES, 8);
            let mut r = rng(opts, 500 + i as u64);
            let xs: Vec<Word> = (0..n).map(|j| us[j % us.len()].concat(&random_word(&mut r, 8))).collect();
            let mut bad = Vec::new();
            let mut non_injective = false;
            let mut max_dt = 0;
            for x in &xs {
                let y = f.apply(x).expect("sampled from the domain");
                e.reset();
                let back = inv.apply(&y);
                let (dt, calls) = (e.domain_tests(), e.calls());
                max_dt = max_dt.max(dt);
                let Some(t) = back else {
                    bad.push(format!("{name}: inverse undefined at {y}"));
                    continue;
                };
                let prefix = y.len() - x.len() + crate::machine::domain_prefix(p, x).unwrap_or(0);
                if dt as u128 > prefix + 1 {
                    bad.push(format!("{name}: {dt} domain tests for an image prefix of length {prefix}"));
                }
                if calls > 2 {
                    bad.push(format!("{name}: {calls} oracle calls at {y}"));
                }
                non_injective |= &t != x;
                if f.apply(&t).as_ref() != Some(&y) {
                    bad.push(format!("{name}: f f' f({x}) != f({x})"));
                }
            }
            let rep = check_semigroup_inverse(&f, &inv, &xs[..xs.len().min(8)], true);
            bad.extend(rep.violations.iter().map(|v| format!("{name} strengthened: {v}")));
            (bad, format!("{name}: {} samples, at most {max_dt} domain tests", xs.len()), non_injective)
        })
        .collect();
    let mut failures: Vec<String> = results.iter().flat_map(|r| r.0.clone()).collect();
    for ((name, _), r) in fx.iter().zip(&results) {
        if name.contains("-head-") && !r.2 {
            failures.push(format!("{name}: f' . f was the identity on every sample"));
        }
    }
    Outcome::from_failures(
        format!(
            "{} programs x {n} samples: f f' f = f, oracle use within prefix count + 1, f' f != id for constant-head",
            fx.len()
        ),
        failures,
    )
}

fn witness_family(_opts: &SuiteOptions) -> Outcome {
    let tail = fixtures::witness_tail();
    let alphabet: Vec<Word> = words_up_to(3).filter(|a| !a.is_empty()).collect();
    let results: Vec<Vec<String>> = alphabet
        .par_iter()
        .map(|a| {
            let p = witness_program(a);
            let mut bad = Vec::new();
            if let Err(e) = regex_domain_check(&p, a, &tail, 30) {
                bad.push(format!("a = {a}: {e}"));
            }
            let other = if a == &Word::lit("0") { Word::lit("1") } else { Word::lit("0") };
            let fam = [witness_program(&other)];
            for c in check_witness_properties(&p, a, &tail, &fam, 10) {
                if !c.passed {
                    bad.push(format!("a = {a}: {c}"));
                }
            }
            bad
        })
        .collect();
    let mut failures: Vec<String> = results.into_iter().flatten().collect();

    let a = Word::lit("1");
    let p = witness_program(&a);
    let broken_tail = Word::lit("0011");
    let broken = fixtures::witness(&a, WitnessKind::Identity, &broken_tail, PolyBound::new(1, 1).unwrap());
    let c1 = check_witness_properties(&broken, &a, &broken_tail, &[witness_program(&Word::lit("0"))], 10);
    if c1.iter().find(|c| c.name == "no-11").is_some_and(|c| c.passed) {
        failures.push("negative control: tail 0011 passed the no-11 property".into());
    }
    let c2 = check_witness_properties(&p, &a, &tail, std::slice::from_ref(&p), 10);
    if c2.iter().find(|c| c.name == "distinct").is_some_and(|c| c.passed) {
        failures.push("negative control: a family containing the witness passed distinctness".into());
    }
    Outcome::from_failures(
        format!("{} witnesses match the regular expression to length 30, properties hold with n_max = 10, both negative controls fail", alphabet.len()),
        failures,
    )
}

fn suffix_tracer(opts: &SuiteOptions) -> Outcome {
    let p = witness_program(&Word::lit("1"));
    let mut us = first_domc(&p, 40, NODES, 20);
    us.retain(|u| u.len() >= 30);
    let letters = [pi(&Word::lit("0")), pi(&Word::lit("1")), rho(&Word::lit("0")), rho(&Word::lit("1"))];
    let mut r = rng(opts, 800);
    let mut failures = Vec::new();
    let mut stages = 0;
    for i in 0..opts.samples {
        let u = &us[i % us.len()];
        let len = r.gen_range(1..=10);
        let x = GeneratorWord::new((0..len).map(|_| letters[r.gen_range(0..4)].clone()).collect());
        let tr = suffix_trace(&x, &header(&p).concat(u), u);
        stages += tr.stages.len();
        if tr.min_suffix() + 10 < u.len() {
            failures.push(format!("a generator word of length {len} left a common suffix of {} < |u| - 10", tr.min_suffix()));
        }
    }
    let u = &us[0];
    let tr = suffix_trace(&gamma_chain(&p), &header(&p).concat(u), u);
    match (tr.last_shaped(), &tr.output) {
        (Some(s), Some(out)) => {
            let (_, u1, u2, _) = s.shape.unwrap();
            let want = encode_tuple(&[crate::machine::serialize(&p), u.clone(), Word::empty()]).unwrap();
            if u2 != 0 || u1 != u.len() || out != &want {
                failures.push(format!("gamma chain ended in shape {:?}, expected an empty third block", s.shape));
            }
        }
        _ => failures.push(format!("gamma chain trace ended early at letter {:?}", tr.undefined_at)),
    }
    let early = suffix_trace(&GeneratorWord::new(vec![padding::expand_m()]), &Word::lit("0101"), u);
    if early.undefined_at != Some(1) {
        failures.push("expand on an unshaped word did not stop the trace".into());
    }
    Outcome::from_failures(
        format!("{} pi/rho words ({stages} stages) keep >= |u| - 10; gamma chain consumes the whole suffix", opts.samples),
        failures,
    )
}

fn s_growth(_opts: &SuiteOptions) -> Outcome {
    let mut failures = Vec::new();
    for m in 0..=5u32 {
        for n in 1..=4u64 {
            let mut t = BigUint::from(n);
            for _ in 0..m {
                t = &t * &t * 2u32;
            }
            let closed = (BigUint::from(1u32) << ((1u64 << m) - 1)) * BigUint::from(n).pow(1u32 << m);
            let got = s_iterate(m, n);
            if got != t || got != closed {
                failures.push(format!("s_iterate({m}, {n}) = {got}, recurrence {t}, closed form {closed}"));
            }
            if m >= 1 && got < s_lower_bound(m, n) {
                failures.push(format!("s_iterate({m}, {n}) = {got} below 2^m n^(2^m)"));
            }
        }
    }
    let s = s_morphism();
    for (m, n) in [(1u32, 1u64), (1, 4), (2, 2), (2, 3), (3, 2)] {
        let mut y = Word::zeros(n as u128).concat(&Word::lit("1011"));
        for _ in 0..m {
            match s.apply(&y) {
                Some(z) => y = z,
                None => break,
            }
        }
        let want = Word::zeros(u128::try_from(s_iterate(m, n)).unwrap()).concat(&Word::lit("1011"));
        if y != want {
            failures.push(format!("machine s^{m} on 0^{n} 1011 gave {y}"));
        }
    }
    Outcome::from_failures("recurrence, closed form and lower bound on m <= 5, n <= 4; machine iterates agree".into(), failures)
}

fn n_seq(_opts: &SuiteOptions) -> Outcome {
    let mut failures = Vec::new();
    for c in [2u64, 4, 6] {
        let seq = n_sequence(c, 4);
        let mut prev = BigUint::from(c);
        for (i, n) in seq.iter().enumerate() {
            let want = BigUint::from(4u32) * &prev * &prev + BigUint::from(8u32) * &prev + 2u32;
            if n != &want {
                failures.push(format!("c = {c}: N_{} = {n}, expected {want}", i + 1));
            }
            if let (Ok(p), Ok(v)) = (u128::try_from(&prev), u128::try_from(n)) {
                if pad_len(p) != Some(v) {
                    failures.push(format!("c = {c}: pad_len disagrees at step {}", i + 1));
                }
            }
            prev = n.clone();
        }
        if !n_sequence_square_identity(c, 4) {
            failures.push(format!("c = {c}: square identity fails"));
        }
    }
    Outcome::from_failures("recurrence and |0^N_i 01| = (2 (N_(i-1) + 1))^2 for c in {2,4,6}, i <= 4".into(), failures)
}

fn budget(opts: &SuiteOptions) -> Outcome {
    let p = fixtures::divergent();
    let mut r = rng(opts, 1100);
    let mut failures = Vec::new();
    for n in 0..=200u128 {
        let x = Word::from_bits(&(0..n).map(|_| r.gen()).collect::<Vec<bool>>());
        let rep = run_traced(&p, &x, None);
        if rep.outcome != RunOutcome::Undefined(Reason::BudgetExceeded) || rep.steps > p.bound().eval(n) + 1 {
            failures.push(format!("|x| = {n}: {:?} after {} steps", rep.outcome, rep.steps));
        }
    }
    Outcome::from_failures("divergent program stops with budget exceeded within bound + 1 steps for |x| <= 200".into(), failures)
}

fn fpref(opts: &SuiteOptions) -> Outcome {
    let mut failures = Vec::new();
    let mut rm: Vec<(String, Program)> = witness_fixtures();
    rm.push(("identity".into(), fixtures::identity()));
    rm.push(("identity_on_00".into(), fixtures::identity_on_00()));
    rm.push(("s".into(), fixtures::s_machine()));
    let bad: Vec<String> = rm
        .par_iter()
        .enumerate()
        .flat_map(|(i, (name, p))| {
            let c = prefix_closure(p);
            let mut r = rng(opts, 1200 + i as u64);
            sample_inputs(p, opts.samples, 30, &mut r)
                .into_iter()
                .filter_map(|x| {
                    let (a, b) = (run(p, &x).into_output(), run(&c, &x).into_output());
                    (a != b).then(|| format!("{name} on {x}: f {}, f_pref {}", show(&a), show(&b)))
                })
                .collect::<Vec<_>>()
        })
        .collect();
    failures.extend(bad);

    let p = fixtures::read_all_then_one();
    let c = prefix_closure(&p);
    let xs: Vec<Word> = words_up_to(6).collect();
    let differs = xs.iter().any(|x| run(&p, x).into_output() != run(&c, x).into_output());
    if !differs {
        failures.push("closure of read_all_then_one agrees with it on every sample".into());
    }
    let zs: Vec<Word> = words_up_to(3).collect();
    let mut checked = 0;
    for x in &xs {
        let Some(y) = run(&c, x).into_output() else { continue };
        checked += 1;
        for z in &zs {
            let l = run(&c, &x.concat(z)).into_output();
            if l.as_ref() != Some(&y.concat(z)) {
                failures.push(format!("closure of read_all_then_one: f({x} {z}) = {}", show(&l)));
            }
        }
    }
    if checked == 0 {
        failures.push("closure of read_all_then_one has no sampled domain point".into());
    }
    Outcome::from_failures(
        format!("{} RM fixtures fixed by the closure; non-RM closure differs and is right-ideal on {checked} points", rm.len()),
        failures,
    )
}
