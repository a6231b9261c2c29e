//! `rmcalc`: run programs, evaluate generator expressions, invert machine
//! maps with an oracle, run the lab experiments and the identity suites.
//!
//! Exit codes: 0 when every requested check passes, 1 when one fails, 2 on
//! usage or input errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rmcalc::fixtures;
use rmcalc::inversion::{build_inverse, check_semigroup_inverse, reference_e_prime};
use rmcalc::lab::{self, s_iterate, s_lower_bound, suffix_trace, GeneratorWord};
use rmcalc::machine::{first_domc, parse_program, run_traced, Program, RunOutcome};
use rmcalc::morphism::dsl::{parse, parse_word, Env};
use rmcalc::morphism::Morphism;
use rmcalc::padding::{header, lemma_chain};
use rmcalc::suites::{run_suite, suite_names, SuiteOptions};
use rmcalc::word::{words_up_to, Word};

#[derive(Parser)]
#[command(name = "rmcalc", version, about = "Right-ideal morphisms on binary words")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a program on one input.
    Run {
        #[arg(long)]
        program: PathBuf,
        #[arg(long)]
        input: String,
        /// Also print steps and head statistics.
        #[arg(long)]
        trace: bool,
    },
    /// Evaluate a generator expression on one input.
    Eval {
        #[arg(long)]
        expr: String,
        #[arg(long, default_value = "ε")]
        input: String,
        #[command(flatten)]
        progs: Programs,
    },
    /// Compare the padded evaluation chain of a program with a direct run.
    Pipeline {
        #[arg(long)]
        program: PathBuf,
        #[arg(long)]
        input: String,
        /// Print MATCH or MISMATCH and fail on a mismatch.
        #[arg(long)]
        diff: bool,
    },
    /// Build the oracle inverse of a program and check the inverse laws.
    Invert {
        #[arg(long)]
        program: PathBuf,
        #[arg(long, value_enum, default_value_t = Oracle::Brute)]
        oracle: Oracle,
        #[arg(long, value_enum, default_value_t = Level::Basic)]
        check: Level,
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// Witnesses, suffix traces and growth of s.
    Lab {
        #[command(subcommand)]
        cmd: LabCmd,
    },
    /// Run identity suites; `all` runs every suite.
    Check {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long)]
        parallel: Option<usize>,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        /// Append wall-clock times.
        #[arg(long)]
        timing: bool,
        /// Print details for passing suites too.
        #[arg(long)]
        verbose: bool,
    },
}

#[derive(Subcommand)]
enum LabCmd {
    /// Check the properties of the witness for block `a`.
    Witness {
        #[arg(long)]
        a: String,
        #[arg(long, default_value_t = 10)]
        nmax: u64,
        /// Blocks of the witnesses the domain code must differ from.
        #[arg(long, value_delimiter = ',')]
        family: Vec<String>,
    },
    /// Trace common suffixes through a generator word on `H(p) u`.
    Trace {
        /// Generator expression; the program is available as `P`.
        #[arg(long)]
        word: String,
        #[arg(long)]
        program: PathBuf,
        /// The word `u`.
        #[arg(long)]
        input: String,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Zero-block lengths of iterates of s.
    Sgrowth {
        #[arg(long, default_value_t = 5)]
        m: u32,
        #[arg(long, default_value_t = 4)]
        n: u64,
    },
}

#[derive(Args)]
struct Programs {
    /// Named programs for the expression, as NAME=FILE.
    #[arg(long = "program", value_name = "NAME=FILE")]
    programs: Vec<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Oracle {
    /// Brute-force preimage search over the domain code.
    Brute,
}

#[derive(Clone, Copy, ValueEnum)]
enum Level {
    Basic,
    Strengthened,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Records,
}

/// An input error, reported with exit code 2.
struct Usage(String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Usage {
        Usage(e.to_string())
    }
}

type Res = Result<bool, Usage>;

fn load(path: &Path) -> Result<Program, Usage> {
    let src = std::fs::read_to_string(path).map_err(|e| Usage(format!("{}: {e}", path.display())))?;
    parse_program(&src).map_err(|e| Usage(format!("{}: {e}", path.display())))
}

fn word(s: &str, env: &Env) -> Result<Word, Usage> {
    parse_word(s, env).map_err(|e| Usage(format!("input {s:?}: {e}")))
}

fn show(w: &Option<Word>) -> String {
    w.as_ref().map_or_else(|| "undefined".to_string(), |w| w.to_string())
}

fn cmd_run(program: &Path, input: &str, trace: bool) -> Res {
    let p = load(program)?;
    let x = word(input, &Env::new())?;
    let r = run_traced(&p, &x, None);
    match &r.outcome {
        RunOutcome::Output { y, .. } => println!("{y}"),
        RunOutcome::Undefined(reason) => println!("undefined ({})", reason.name()),
    }
    if trace {
        println!("steps {}", r.steps);
        println!("budget {}", p.bound().eval(x.len()));
        println!("copy_entry {}", r.copy_entry.map_or("-".into(), |v| v.to_string()));
        println!("max_read_before_copy {}", r.max_read_before_copy.map_or("-".into(), |v| v.to_string()));
    }
    Ok(true)
}

fn cmd_eval(expr: &str, input: &str, progs: &Programs) -> Res {
    let mut env = Env::new();
    for arg in &progs.programs {
        let (name, file) = arg.split_once('=').ok_or_else(|| Usage(format!("expected NAME=FILE, got {arg:?}")))?;
        env.insert(name, load(Path::new(file))?);
    }
    let f = parse(expr, &env)?;
    let x = word(input, &env)?;
    println!("{}", show(&f.apply(&x)));
    Ok(true)
}

fn cmd_pipeline(program: &Path, input: &str, diff: bool) -> Res {
    let p = load(program)?;
    let x = word(input, &Env::new())?;
    let chain = lemma_chain(&p).apply(&x);
    let direct = run_traced(&p, &x, None).outcome.into_output();
    println!("chain  {}", show(&chain));
    println!("direct {}", show(&direct));
    if diff {
        let same = chain == direct;
        println!("{}", if same { "MATCH" } else { "MISMATCH" });
        return Ok(same);
    }
    Ok(true)
}

fn cmd_invert(program: &Path, _oracle: Oracle, level: Level, samples: usize) -> Res {
    let p = load(program)?;
    let cfg = rmcalc::padding::EvalConfig::q2();
    let e = Arc::new(reference_e_prime(&cfg, std::slice::from_ref(&p)));
    let inv = build_inverse(&p, e.clone(), &cfg);
    let f = Morphism::machine("f", p.clone());
    let us = first_domc(&p, 24, 1 << 16, 8);
    if us.is_empty() {
        return Err(Usage("no domain-code word of length <= 24".into()));
    }
    let zs: Vec<Word> = words_up_to(3).collect();
    let xs: Vec<Word> = (0..samples).map(|i| us[i % us.len()].concat(&zs[(i / us.len()) % zs.len()])).collect();
    let mut ok = true;
    let (mut max_dt, mut max_calls) = (0, 0);
    for x in &xs {
        let y = f.apply(x).expect("sampled from the domain");
        e.reset();
        let t = inv.apply(&y);
        max_dt = max_dt.max(e.domain_tests());
        max_calls = max_calls.max(e.calls());
        let back = t.as_ref().and_then(|t| f.apply(t));
        let good = back.as_ref() == Some(&y);
        ok &= good;
        println!("{} x={x} f(x)={y} f'(f(x))={} domain_tests={} calls={}", if good { "ok  " } else { "FAIL" }, show(&t), e.domain_tests(), e.calls());
    }
    let rep = check_semigroup_inverse(&f, &inv, &xs, matches!(level, Level::Strengthened));
    for v in &rep.violations {
        println!("violation: {v}");
    }
    ok &= rep.passed();
    println!("samples {} checked {} violations {}", xs.len(), rep.checked, rep.violations.len());
    println!("max domain_tests {max_dt} max calls {max_calls}");
    println!("{}", if ok { "PASS" } else { "FAIL" });
    Ok(ok)
}

fn cmd_witness(a: &str, nmax: u64, family: &[String]) -> Res {
    let a: Word = a.parse().map_err(|_| Usage(format!("bad block {a:?}")))?;
    if a.is_empty() {
        return Err(Usage("the block must be non-empty".into()));
    }
    let fam: Vec<Program> = if family.is_empty() {
        let other = if a == Word::lit("0") { "1" } else { "0" };
        vec![lab::witness_program(&Word::lit(other))]
    } else {
        family
            .iter()
            .map(|b| b.parse::<Word>().ok().filter(|b| !b.is_empty()).map(|b| lab::witness_program(&b)))
            .collect::<Option<_>>()
            .ok_or_else(|| Usage("bad family block".into()))?
    };
    let p = lab::witness_program(&a);
    let checks = lab::check_witness_properties(&p, &a, &fixtures::witness_tail(), &fam, nmax);
    for c in &checks {
        println!("{c}");
    }
    Ok(checks.iter().all(|c| c.passed))
}

fn cmd_trace(expr: &str, program: &Path, input: &str, format: Format) -> Res {
    let p = load(program)?;
    let env = Env::new().with("P", p.clone());
    let x = GeneratorWord::from_morphism(&parse(expr, &env)?);
    let u = word(input, &env)?;
    let tr = suffix_trace(&x, &header(&p).concat(&u), &u);
    match format {
        Format::Table => print!("{tr}"),
        Format::Records => {
            for s in &tr.stages {
                let shape = s.shape.map_or("null".to_string(), |(a, b, c, d)| format!("[{a},{b},{c},{d}]"));
                println!(
                    "{{\"stage\":{},\"letter\":\"{}\",\"len\":{},\"suffix\":{},\"shape\":{shape}}}",
                    s.applied,
                    s.letter.replace('"', "'"),
                    s.len,
                    s.suffix
                );
            }
            if let Some(i) = tr.undefined_at {
                println!("{{\"undefined_at\":{i}}}");
            }
        }
    }
    Ok(true)
}

fn cmd_sgrowth(m: u32, n: u64) -> Res {
    if m == 0 || n == 0 {
        return Err(Usage("m and n must be positive".into()));
    }
    println!("{:>3} {:>3} {:>40} {:>40} ok", "m", "n", "t_m", "2^m n^(2^m)");
    let mut ok = true;
    for i in 1..=m {
        for j in 1..=n {
            let t = s_iterate(i, j);
            let lb = s_lower_bound(i, j);
            let good = t >= lb;
            ok &= good;
            println!("{i:>3} {j:>3} {t:>40} {lb:>40} {}", if good { "yes" } else { "no" });
        }
    }
    Ok(ok)
}

fn cmd_check(suite: &str, opts: &SuiteOptions, timing: bool, verbose: bool) -> Res {
    let names: Vec<&str> = if suite == "all" {
        suite_names()
    } else if suite_names().contains(&suite) {
        vec![suite]
    } else {
        return Err(Usage(format!("unknown suite {suite:?}; known: all, {}", suite_names().join(", "))));
    };
    let start = Instant::now();
    let mut ok = true;
    for n in names {
        let r = run_suite(n, opts).expect("known suite");
        ok &= r.passed;
        let mut line = r.line();
        if timing {
            line.push_str(&format!(" ({:.3}s)", r.elapsed.as_secs_f64()));
        }
        println!("{line}");
        if !r.passed || verbose {
            for d in &r.details {
                println!("    {d}");
            }
        }
    }
    if timing {
        println!("total {:.3}s", start.elapsed().as_secs_f64());
    }
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.cmd {
        Cmd::Run { program, input, trace } => cmd_run(program, input, *trace),
        Cmd::Eval { expr, input, progs } => cmd_eval(expr, input, progs),
        Cmd::Pipeline { program, input, diff } => cmd_pipeline(program, input, *diff),
        Cmd::Invert { program, oracle, check, samples } => cmd_invert(program, *oracle, *check, *samples),
        Cmd::Lab { cmd } => match cmd {
            LabCmd::Witness { a, nmax, family } => cmd_witness(a, *nmax, family),
            LabCmd::Trace { word, program, input, format } => cmd_trace(word, program, input, *format),
            LabCmd::Sgrowth { m, n } => cmd_sgrowth(*m, *n),
        },
        Cmd::Check { suite, samples, parallel, seed, timing, verbose } => {
            let opts = SuiteOptions { samples: *samples, parallel: *parallel, seed: *seed };
            cmd_check(suite, &opts, *timing, *verbose)
        }
    };
    match res {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

