//! Partial maps on binary words: named generators, machine-backed maps,
//! composites, restrictions and oracles.
//!
//! Composites apply right to left, so `compose(&[f, g])` is `f ∘ g` and
//! runs `g` first.

pub mod dsl;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::machine::{run, Discipline, Program};
use crate::word::{code, parse_coded_blocks, parse_coded_prefix, words_up_to, PrefixCode, Word, WordBuilder};

pub type PartialFn = Arc<dyn Fn(&Word) -> Option<Word> + Send + Sync>;
pub type Filter = Arc<dyn Fn(&Word, &Word) -> bool + Send + Sync>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MorphismError {
    #[error("a composite needs at least one factor")]
    EmptyComposite,
}

#[derive(Clone)]
pub struct Morphism(Arc<Node>);

enum Node {
    Named { name: String, f: PartialFn, rm: bool },
    Machine { name: String, p: Arc<Program> },
    Composite(Vec<Morphism>),
    /// Keeps the points `x` with `keep(x, base(x))`.
    Restricted { base: Morphism, label: String, keep: Filter, rm: bool },
    Oracle { name: String, f: PartialFn },
}

impl Morphism {
    /// A named right-ideal generator.
    pub fn named(name: impl Into<String>, f: impl Fn(&Word) -> Option<Word> + Send + Sync + 'static) -> Morphism {
        Morphism(Arc::new(Node::Named { name: name.into(), f: Arc::new(f), rm: true }))
    }

    /// A named map that is not claimed to be a right-ideal morphism.
    pub fn plain(name: impl Into<String>, f: impl Fn(&Word) -> Option<Word> + Send + Sync + 'static) -> Morphism {
        Morphism(Arc::new(Node::Named { name: name.into(), f: Arc::new(f), rm: false }))
    }

    pub fn machine(name: impl Into<String>, p: Program) -> Morphism {
        Morphism(Arc::new(Node::Machine { name: name.into(), p: Arc::new(p) }))
    }

    pub fn oracle(name: impl Into<String>, f: impl Fn(&Word) -> Option<Word> + Send + Sync + 'static) -> Morphism {
        Morphism(Arc::new(Node::Oracle { name: name.into(), f: Arc::new(f) }))
    }

    /// `self ∘ g`: `g` first.
    pub fn after(&self, g: &Morphism) -> Morphism {
        let mut parts = self.factors();
        parts.extend(g.factors());
        Morphism(Arc::new(Node::Composite(parts)))
    }

    fn factors(&self) -> Vec<Morphism> {
        match &*self.0 {
            Node::Composite(fs) => fs.clone(),
            _ => vec![self.clone()],
        }
    }

    /// `n`-fold self-composition; the identity for `n = 0`.
    pub fn pow(&self, n: usize) -> Morphism {
        if n == 0 {
            return identity();
        }
        let fs = vec![self.clone(); n];
        compose(&fs).expect("non-empty")
    }

    pub fn restrict(
        &self,
        label: impl Into<String>,
        rm: bool,
        keep: impl Fn(&Word, &Word) -> bool + Send + Sync + 'static,
    ) -> Morphism {
        Morphism(Arc::new(Node::Restricted { base: self.clone(), label: label.into(), keep: Arc::new(keep), rm }))
    }

    pub fn apply(&self, x: &Word) -> Option<Word> {
        match &*self.0 {
            Node::Named { f, .. } | Node::Oracle { f, .. } => f(x),
            Node::Machine { p, .. } => run(p, x).into_output(),
            Node::Composite(fs) => {
                let mut y = x.clone();
                for f in fs.iter().rev() {
                    y = f.apply(&y)?;
                }
                Some(y)
            }
            Node::Restricted { base, keep, .. } => {
                let y = base.apply(x)?;
                keep(x, &y).then_some(y)
            }
        }
    }

    /// Whether the value is claimed to satisfy `f(xz) = f(x) z`.
    pub fn is_rm(&self) -> bool {
        match &*self.0 {
            Node::Named { rm, .. } | Node::Restricted { rm, .. } => *rm,
            Node::Machine { p, .. } => p.discipline() == Discipline::Rm,
            Node::Composite(fs) => fs.iter().all(Morphism::is_rm),
            Node::Oracle { .. } => false,
        }
    }

    /// The program behind a machine-backed value.
    pub fn program(&self) -> Option<&Program> {
        match &*self.0 {
            Node::Machine { p, .. } => Some(p),
            _ => None,
        }
    }

    /// Factors in application order reversed, as written.
    pub fn letters(&self) -> Vec<Morphism> {
        self.factors()
    }
}

impl fmt::Display for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            Node::Named { name, .. } | Node::Machine { name, .. } | Node::Oracle { name, .. } => f.write_str(name),
            Node::Composite(fs) => {
                for (i, g) in fs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" . ")?;
                    }
                    write!(f, "{g}")?;
                }
                Ok(())
            }
            Node::Restricted { base, label, .. } => write!(f, "{label}[{base}]"),
        }
    }
}

impl fmt::Debug for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Morphism({self})")
    }
}

pub fn compose(fs: &[Morphism]) -> Result<Morphism, MorphismError> {
    if fs.is_empty() {
        return Err(MorphismError::EmptyComposite);
    }
    if fs.len() == 1 {
        return Ok(fs[0].clone());
    }
    Ok(Morphism(Arc::new(Node::Composite(fs.iter().flat_map(Morphism::factors).collect()))))
}

pub fn identity() -> Morphism {
    Morphism::named("id", |x| Some(x.clone()))
}

/// `x -> w x`.
pub fn pi(w: &Word) -> Morphism {
    let w = w.clone();
    Morphism::named(format!("pi({})", w), move |x| Some(w.concat(x)))
}

/// `w x -> x`.
pub fn rho(w: &Word) -> Morphism {
    let w = w.clone();
    Morphism::named(format!("rho({})", w), move |x| x.strip_prefix(&w))
}

/// `code(u) 11 v -> u v`.
pub fn decode_m() -> Morphism {
    Morphism::named("decode", |x| {
        let (u, v) = parse_coded_prefix(x)?;
        Some(u.concat(&v))
    })
}

/// `code(u1) 11 code(u2) 11 v -> code(u1) 11 u2 v`.
pub fn decode2_m() -> Morphism {
    Morphism::named("decode2", |x| {
        let (us, v) = parse_coded_blocks(x, 2)?;
        let mut b = WordBuilder::new();
        b.push_word(&code(&us[0]));
        b.push_bits(&[true, true]);
        b.push_word(&us[1]);
        b.push_word(&v);
        Some(b.finish())
    })
}

/// `f^C: code(x) 11 v -> code(f(x)) 11 v`.
pub fn c_embed(f: &Morphism) -> Morphism {
    let g = f.clone();
    Morphism::named(format!("C[{f}]"), move |x| {
        let (u, v) = parse_coded_prefix(x)?;
        let y = g.apply(&u)?;
        let mut b = WordBuilder::new();
        b.push_word(&code(&y));
        b.push_bits(&[true, true]);
        b.push_word(&v);
        Some(b.finish())
    })
}

/// Prefix-minimal elements of the domain among words of length `<= l`.
pub fn domain_code(f: &Morphism, l: usize) -> PrefixCode {
    let mut found: Vec<Word> = Vec::new();
    for w in words_up_to(l) {
        if found.iter().any(|m| w.starts_with(m)) {
            continue;
        }
        if f.apply(&w).is_some() {
            found.push(w);
        }
    }
    PrefixCode::new(found).expect("prefix-minimal words form a prefix code")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::lit(s)
    }

    #[test]
    fn generators() {
        assert_eq!(pi(&w("0")).apply(&w("1")), Some(w("01")));
        assert_eq!(rho(&w("0")).apply(&w("01")), Some(w("1")));
        assert_eq!(rho(&w("0")).apply(&w("11")), None);
        assert_eq!(decode_m().apply(&w("000111101")), Some(w("01101")));
        assert_eq!(decode_m().apply(&w("11")), Some(Word::empty()));
        assert_eq!(decode2_m().apply(&w("00110111")), Some(w("00111")));
    }

    #[test]
    fn composition_order() {
        let f = compose(&[rho(&w("0")), pi(&w("0"))]).unwrap();
        assert_eq!(f.apply(&w("101")), Some(w("101")));
        let g = compose(&[pi(&w("1")), pi(&w("0"))]).unwrap();
        assert_eq!(g.apply(&Word::empty()), Some(w("10")));
        assert!(compose(&[]).is_err());
    }

    #[test]
    fn embedding_of_reversal() {
        let rev = Morphism::plain("rev", |x: &Word| {
            let mut b = x.to_bits();
            b.reverse();
            Some(Word::from_bits(&b))
        });
        assert_eq!(c_embed(&rev).apply(&w("0001111")), Some(w("0100111")));
    }

    #[test]
    fn domain_codes() {
        let d = domain_code(&decode_m(), 4);
        assert_eq!(d.words(), &[w("11"), w("0011"), w("0111")]);
        assert_eq!(domain_code(&pi(&w("0")), 2).words(), &[Word::empty()]);
    }
}
