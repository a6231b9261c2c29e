//! Line-oriented program text.
//!
//! ```text
//! states=4 tapes=1 a=1 k=1 discipline=rm
//! // comment
//! (0,#,*) -> (3,*S,R,-)
//! (3,0,B) -> (3,XR,R,0)
//! ```
//!
//! A rule reads `(state,input,w1,...,wt) -> (state',c1,...,ct,inmove,out)`
//! where each `ci` is a write (`0 1 # B X`, or `*` to keep) followed by a
//! move `L R S`, `inmove` is `R` or `S` and `out` is `0`, `1` or `-`.
//! The ex-image wrapper is not part of the text form.

use std::fmt::Write as _;

use super::{Discipline, InMove, MachineError, Move, Pat, PolyBound, Program, Rule, Sym, Write};

fn err(line: usize, msg: impl Into<String>) -> MachineError {
    MachineError::Text { line, msg: msg.into() }
}

fn pat(s: &str, line: usize) -> Result<Pat, MachineError> {
    let mut cs = s.chars();
    match (cs.next(), cs.next()) {
        (Some('*'), None) => Ok(Pat::Any),
        (Some(c), None) => Sym::from_char(c).map(Pat::Is).ok_or_else(|| err(line, format!("bad symbol {s:?}"))),
        _ => Err(err(line, format!("bad pattern {s:?}"))),
    }
}

fn split_tuple(s: &str, line: usize) -> Result<Vec<String>, MachineError> {
    let s = s.trim();
    let inner = s
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| err(line, "expected a parenthesized tuple"))?;
    Ok(inner.split(',').map(|t| t.trim().to_string()).collect())
}

fn parse_rule(text: &str, tapes: usize, line: usize) -> Result<Rule, MachineError> {
    let (lhs, rhs) = text.split_once("->").ok_or_else(|| err(line, "missing ->"))?;
    let l = split_tuple(lhs, line)?;
    let r = split_tuple(rhs, line)?;
    if l.len() != tapes + 2 || r.len() != tapes + 3 {
        return Err(err(line, format!("expected {tapes} work tapes")));
    }
    let state = |s: &str| s.parse::<u32>().map_err(|_| err(line, format!("bad state {s:?}")));
    let from = state(&l[0])?;
    let input = pat(&l[1], line)?;
    let work = l[2..].iter().map(|s| pat(s, line)).collect::<Result<Vec<_>, _>>()?;
    let to = state(&r[0])?;
    let mut writes = Vec::with_capacity(tapes);
    let mut moves = Vec::with_capacity(tapes);
    for c in &r[1..=tapes] {
        let cs: Vec<char> = c.chars().collect();
        if cs.len() != 2 {
            return Err(err(line, format!("bad tape action {c:?}")));
        }
        writes.push(match cs[0] {
            '*' => Write::Keep,
            ch => Write::Put(Sym::from_char(ch).ok_or_else(|| err(line, format!("bad symbol in {c:?}")))?),
        });
        moves.push(match cs[1] {
            'L' => Move::L,
            'R' => Move::R,
            'S' => Move::S,
            _ => return Err(err(line, format!("bad move in {c:?}"))),
        });
    }
    let in_move = match r[tapes + 1].as_str() {
        "R" => InMove::R,
        "S" => InMove::S,
        s => return Err(err(line, format!("bad input move {s:?}"))),
    };
    let out = match r[tapes + 2].as_str() {
        "-" => None,
        "0" => Some(false),
        "1" => Some(true),
        s => return Err(err(line, format!("bad output {s:?}"))),
    };
    Ok(Rule { from, input, work, to, writes, moves, in_move, out })
}

pub fn parse_program(src: &str) -> Result<Program, MachineError> {
    let mut header: Option<(u32, usize, u64, u32, Discipline)> = None;
    let mut rules = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let line = i + 1;
        let text = raw.split("//").next().unwrap().trim();
        if text.is_empty() {
            continue;
        }
        match header {
            None => {
                let mut f = std::collections::HashMap::new();
                for kv in text.split_whitespace() {
                    let (k, v) = kv.split_once('=').ok_or_else(|| err(line, format!("bad header field {kv:?}")))?;
                    f.insert(k, v);
                }
                let num = |k: &str| -> Result<u64, MachineError> {
                    f.get(k)
                        .ok_or_else(|| err(line, format!("missing {k}=")))?
                        .parse()
                        .map_err(|_| err(line, format!("bad {k}=")))
                };
                let d = f.get("discipline").ok_or_else(|| err(line, "missing discipline="))?;
                let d = Discipline::from_name(d).ok_or_else(|| err(line, format!("bad discipline {d:?}")))?;
                header = Some((num("states")? as u32, num("tapes")? as usize, num("a")?, num("k")? as u32, d));
            }
            Some((_, tapes, ..)) => rules.push(parse_rule(text, tapes, line)?),
        }
    }
    let (states, tapes, a, k, d) = header.ok_or_else(|| err(0, "missing header"))?;
    Program::new(states, tapes, PolyBound::new(a, k)?, d, rules)
}

fn pat_str(p: Pat) -> char {
    match p {
        Pat::Is(s) => s.to_char(),
        Pat::Any => '*',
    }
}

pub fn program_to_text(p: &Program) -> String {
    let mut s = String::new();
    let b = p.bound();
    let _ = writeln!(
        s,
        "states={} tapes={} a={} k={} discipline={}",
        p.states(),
        p.tapes(),
        b.a(),
        b.k(),
        p.discipline().name()
    );
    for r in p.rules() {
        let mut lhs = vec![r.from.to_string(), pat_str(r.input).to_string()];
        lhs.extend(r.work.iter().map(|w| pat_str(*w).to_string()));
        let mut rhs = vec![r.to.to_string()];
        for (w, m) in r.writes.iter().zip(&r.moves) {
            let wc = match w {
                Write::Keep => '*',
                Write::Put(s) => s.to_char(),
            };
            let mc = match m {
                Move::L => 'L',
                Move::R => 'R',
                Move::S => 'S',
            };
            rhs.push(format!("{wc}{mc}"));
        }
        rhs.push(if r.in_move == InMove::R { "R" } else { "S" }.to_string());
        rhs.push(match r.out {
            None => "-".to_string(),
            Some(b) => (b as u8).to_string(),
        });
        let _ = writeln!(s, "({}) -> ({})", lhs.join(","), rhs.join(","));
    }
    s
}
