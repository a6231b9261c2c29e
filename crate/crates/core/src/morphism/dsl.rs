//! Text syntax for morphism expressions.
//!
//! ```text
//! expr  := term ('.' term)*          applied right to left
//! term  := name ['(' args ')'] ['^' n]
//! word  := item*                     item = bits | 0*<n> | ε | code(word) | <program name>
//! bound := q2 | <a>,<k>
//! ```
//!
//! A program name inside a word stands for the program's code, so
//! `rho(code(W)11)` strips the header of program `W`.
//!
//! | term | arguments |
//! |------|-----------|
//! | `pi`, `rho` | word |
//! | `pi0 pi1 rho0 rho1 id decode decode2 expand reexpand recontr contr s` | none |
//! | `evRcc evRc evRcDirect gammaq Eq rho2q` | bound, default `q2` |
//! | `gammao gamma prog chain closure` | program name |

use std::collections::BTreeMap;

use thiserror::Error;

use super::{compose, decode2_m, decode_m, identity, pi, rho, Morphism};
use crate::machine::{prefix_closure, serialize, PolyBound, Program};
use crate::padding::{self, EvalConfig};
use crate::word::{code, Word, WordBuilder};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DslError {
    #[error("at offset {0}: {1}")]
    Syntax(usize, String),
    #[error("unknown morphism {0:?}")]
    Unknown(String),
    #[error("unknown program {0:?}")]
    UnknownProgram(String),
    #[error("{0}: {1}")]
    Args(String, String),
}

/// Named programs visible to an expression.
#[derive(Clone, Debug, Default)]
pub struct Env {
    programs: BTreeMap<String, Program>,
}

impl Env {
    pub fn new() -> Env {
        Env::default()
    }

    pub fn with(mut self, name: impl Into<String>, p: Program) -> Env {
        self.programs.insert(name.into(), p);
        self
    }

    pub fn insert(&mut self, name: impl Into<String>, p: Program) {
        self.programs.insert(name.into(), p);
    }

    fn program(&self, name: &str) -> Result<&Program, DslError> {
        self.programs.get(name).ok_or_else(|| DslError::UnknownProgram(name.to_string()))
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    env: &'a Env,
}

impl Parser<'_> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, DslError> {
        Err(DslError::Syntax(self.pos, msg.into()))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Result<String, DslError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a name");
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn number(&mut self) -> Result<u128, DslError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        match s.parse() {
            Ok(n) => Ok(n),
            Err(_) => {
                self.pos = start;
                self.err("expected a number")
            }
        }
    }

    fn expr(&mut self) -> Result<Morphism, DslError> {
        let mut terms = vec![self.term()?];
        while self.eat(b'.') {
            terms.push(self.term()?);
        }
        Ok(compose(&terms).expect("non-empty"))
    }

    /// The raw text of a parenthesized argument list, if any.
    fn args_text(&mut self) -> Result<Option<(usize, String)>, DslError> {
        if !self.eat(b'(') {
            return Ok(None);
        }
        let start = self.pos;
        let mut depth = 1;
        while self.pos < self.src.len() {
            match self.src[self.pos] {
                b'(' => depth += 1,
                b')' => {
                    depth -= 1;
                    if depth == 0 {
                        let s = String::from_utf8_lossy(&self.src[start..self.pos]).into_owned();
                        self.pos += 1;
                        return Ok(Some((start, s)));
                    }
                }
                _ => {}
            }
            self.pos += 1;
        }
        self.err("unbalanced parentheses")
    }

    fn term(&mut self) -> Result<Morphism, DslError> {
        let name = self.ident()?;
        let args = self.args_text()?;
        let m = self.resolve(&name, args)?;
        if self.eat(b'^') {
            let n = self.number()?;
            return Ok(m.pow(n as usize));
        }
        Ok(m)
    }

    fn resolve(&self, name: &str, args: Option<(usize, String)>) -> Result<Morphism, DslError> {
        let bad = |msg: &str| DslError::Args(name.to_string(), msg.to_string());
        let none = |m: Morphism| if args.is_none() { Ok(m) } else { Err(bad("takes no arguments")) };
        let word = || -> Result<Word, DslError> {
            let (off, s) = args.clone().ok_or_else(|| bad("needs a word argument"))?;
            parse_word(&s, self.env).map_err(|e| match e {
                DslError::Syntax(p, m) => DslError::Syntax(off + p, m),
                e => e,
            })
        };
        let cfg = || -> Result<EvalConfig, DslError> {
            match &args {
                None => Ok(EvalConfig::q2()),
                Some((_, s)) => parse_bound(s).map(EvalConfig::new).ok_or_else(|| bad("expected q2 or a,k")),
            }
        };
        let prog = || -> Result<&Program, DslError> {
            let (_, s) = args.as_ref().ok_or_else(|| bad("needs a program name"))?;
            self.env.program(s.trim())
        };
        Ok(match name {
            "pi" => pi(&word()?),
            "rho" => rho(&word()?),
            "pi0" => none(pi(&Word::lit("0")))?,
            "pi1" => none(pi(&Word::lit("1")))?,
            "rho0" => none(rho(&Word::lit("0")))?,
            "rho1" => none(rho(&Word::lit("1")))?,
            "id" => none(identity())?,
            "decode" => none(decode_m())?,
            "decode2" => none(decode2_m())?,
            "expand" => none(padding::expand_m())?,
            "reexpand" => none(padding::reexpand_m())?,
            "recontr" => none(padding::recontr_m())?,
            "contr" => none(padding::contr_m())?,
            "s" => none(crate::lab::s_morphism())?,
            "evRcc" => padding::evr_cc(&cfg()?),
            "evRc" => padding::evr_c(&cfg()?),
            "evRcDirect" => padding::evr_c_direct(&cfg()?),
            "gammaq" => padding::gamma_q(&cfg()?),
            "Eq" => padding::e_q(&cfg()?),
            "rho2q" => padding::rho2_q(&cfg()?),
            "gammao" => padding::gamma_o_w(prog()?),
            "gamma" => padding::gamma_w(prog()?),
            "prog" => {
                let p = prog()?;
                Morphism::machine(format!("prog({})", args.as_ref().unwrap().1.trim()), p.clone())
            }
            "chain" => padding::lemma_chain(prog()?),
            "closure" => {
                let p = prefix_closure(prog()?);
                Morphism::machine(format!("closure({})", args.as_ref().unwrap().1.trim()), p)
            }
            _ => return Err(DslError::Unknown(name.to_string())),
        })
    }
}

fn parse_bound(s: &str) -> Option<PolyBound> {
    let s = s.trim();
    if s == "q2" {
        return Some(padding::q2());
    }
    let (a, k) = s.split_once(',')?;
    PolyBound::new(a.trim().parse().ok()?, k.trim().parse().ok()?).ok()
}

fn word_items(p: &mut Parser<'_>, b: &mut WordBuilder, close: bool) -> Result<(), DslError> {
    loop {
        match p.peek() {
            None if !close => return Ok(()),
            None => return p.err("expected ')'"),
            Some(b')') if close => {
                p.pos += 1;
                return Ok(());
            }
            Some(b'0') if p.src.get(p.pos + 1) == Some(&b'*') => {
                p.pos += 2;
                let n = p.number()?;
                b.push_zeros(n);
            }
            Some(b'0' | b'1') => {
                b.push(p.src[p.pos] == b'1');
                p.pos += 1;
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let name = p.ident()?;
                if name == "code" && p.eat(b'(') {
                    let mut inner = WordBuilder::new();
                    word_items(p, &mut inner, true)?;
                    b.push_word(&code(&inner.finish()));
                } else {
                    b.push_word(&serialize(p.env.program(&name)?));
                }
            }
            Some(_) if p.src[p.pos..].starts_with("ε".as_bytes()) => p.pos += "ε".len(),
            Some(c) => return p.err(format!("unexpected {:?} in word", c as char)),
        }
    }
}

/// Parses a word argument.
pub fn parse_word(src: &str, env: &Env) -> Result<Word, DslError> {
    let mut p = Parser { src: src.as_bytes(), pos: 0, env };
    let mut b = WordBuilder::new();
    word_items(&mut p, &mut b, false)?;
    Ok(b.finish())
}

/// Parses an expression.
pub fn parse(src: &str, env: &Env) -> Result<Morphism, DslError> {
    let mut p = Parser { src: src.as_bytes(), pos: 0, env };
    let m = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn words_and_terms() {
        let env = Env::new().with("I", crate::fixtures::identity());
        assert_eq!(parse_word("code(01)11 0*3", &env).unwrap(), Word::lit("000111000"));
        assert_eq!(parse_word("ε", &env).unwrap(), Word::empty());
        let m = parse("rho0 . pi(0)^2", &env).unwrap();
        assert_eq!(m.apply(&Word::lit("1")), Some(Word::lit("01")));
        let h = parse("rho(code(I)11) . gammao(I)", &env).unwrap();
        assert_eq!(h.apply(&Word::lit("01")), Some(Word::lit("1101")));
        assert!(matches!(parse("nope", &env), Err(DslError::Unknown(_))));
        assert!(parse("pi(2)", &env).is_err());
        assert!(parse("evRcc(12,2) . expand", &env).is_ok());
    }
}
