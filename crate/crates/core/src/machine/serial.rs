//! Binary program codes.
//!
//! Every field is a natural number written as `1^|b| 0 b`, where `b` is
//! its binary expansion without leading zeros (empty for 0). Layout:
//!
//! ```text
//! version(=1) states tapes a k discipline wrapped [inner] rule_count rules...
//! rule = from input work[tapes] to writes[tapes] moves[tapes] in_move out
//! ```
//!
//! `discipline`: 0 plain, 1 sequential, 2 rm. `wrapped` is 1 for images of
//! [`ex_transform`](super::ex_transform), followed by the inner program's
//! code. Patterns: symbol index (`0 1 # B X` as 0..4) or 5 for `*`
//! (input patterns use 4 for `*`). Writes: 0 keep, 1+symbol index.
//! Moves: 0 L, 1 R, 2 S. Input moves: 0 R, 1 S. Output: 0 none, 1 bit 0,
//! 2 bit 1. Decoding accepts canonical codes only.

use std::sync::Arc;

use super::{
    ex_transform, Discipline, InMove, MachineError, Move, Pat, PolyBound, Program, Rule, Sym, Write,
};
use crate::word::{Word, WordBuilder};

const VERSION: u128 = 1;
const MAX_BITS: u128 = 1 << 26;

fn put(b: &mut WordBuilder, n: u128) {
    let w = 128 - n.leading_zeros();
    b.push_run(true, w as u128);
    b.push(false);
    for i in (0..w).rev() {
        b.push((n >> i) & 1 == 1);
    }
}

fn put_pat(b: &mut WordBuilder, p: Pat, wildcard: u128) {
    put(b, match p {
        Pat::Is(s) => s.index(),
        Pat::Any => wildcard,
    });
}

fn write_program(b: &mut WordBuilder, p: &Program) {
    put(b, VERSION);
    put(b, p.states() as u128);
    put(b, p.tapes() as u128);
    put(b, p.bound().a() as u128);
    put(b, p.bound().k() as u128);
    put(b, match p.discipline() {
        Discipline::Plain => 0,
        Discipline::Sequential => 1,
        Discipline::Rm => 2,
    });
    match p.wrapped() {
        Some(inner) => {
            put(b, 1);
            write_program(b, inner);
        }
        None => put(b, 0),
    }
    put(b, p.rules().len() as u128);
    for r in p.rules() {
        put(b, r.from as u128);
        put_pat(b, r.input, 4);
        for w in &r.work {
            put_pat(b, *w, 5);
        }
        put(b, r.to as u128);
        for w in &r.writes {
            put(b, match w {
                Write::Keep => 0,
                Write::Put(s) => 1 + s.index(),
            });
        }
        for m in &r.moves {
            put(b, match m {
                Move::L => 0,
                Move::R => 1,
                Move::S => 2,
            });
        }
        put(b, match r.in_move {
            InMove::R => 0,
            InMove::S => 1,
        });
        put(b, match r.out {
            None => 0,
            Some(false) => 1,
            Some(true) => 2,
        });
    }
}

/// The program's code word.
pub fn serialize(p: &Program) -> Word {
    let mut b = WordBuilder::new();
    write_program(&mut b, p);
    b.finish()
}

struct Reader {
    bits: Vec<bool>,
    pos: usize,
}

fn bad(msg: impl Into<String>) -> MachineError {
    MachineError::Decode(msg.into())
}

impl Reader {
    fn nat(&mut self) -> Result<u128, MachineError> {
        let mut w = 0usize;
        loop {
            match self.bits.get(self.pos) {
                Some(true) => {
                    w += 1;
                    self.pos += 1;
                }
                Some(false) => {
                    self.pos += 1;
                    break;
                }
                None => return Err(bad("truncated field")),
            }
        }
        if w > 127 {
            return Err(bad("field too wide"));
        }
        if w > 0 && self.bits.get(self.pos) != Some(&true) {
            return Err(bad("leading zero in field"));
        }
        let mut n = 0u128;
        for _ in 0..w {
            let b = *self.bits.get(self.pos).ok_or_else(|| bad("truncated field"))?;
            n = (n << 1) | b as u128;
            self.pos += 1;
        }
        Ok(n)
    }

    fn small(&mut self, limit: u128, what: &str) -> Result<u128, MachineError> {
        let n = self.nat()?;
        if n > limit {
            return Err(bad(format!("{what} out of range: {n}")));
        }
        Ok(n)
    }

    fn pat(&mut self, wildcard: u128) -> Result<Pat, MachineError> {
        let n = self.small(wildcard, "pattern")?;
        if n == wildcard {
            Ok(Pat::Any)
        } else {
            Sym::from_index(n).map(Pat::Is).ok_or_else(|| bad("pattern symbol"))
        }
    }

    fn program(&mut self, depth: usize) -> Result<Program, MachineError> {
        if depth > 8 {
            return Err(bad("wrapper nesting too deep"));
        }
        if self.nat()? != VERSION {
            return Err(bad("unknown version"));
        }
        let states = self.small(1 << 24, "state count")? as u32;
        let tapes = self.small(256, "tape count")? as usize;
        let a = self.small(u64::MAX as u128, "coefficient")? as u64;
        let k = self.small(64, "degree")? as u32;
        let discipline = match self.small(2, "discipline")? {
            0 => Discipline::Plain,
            1 => Discipline::Sequential,
            _ => Discipline::Rm,
        };
        let inner = match self.small(1, "wrapper flag")? {
            1 => Some(self.program(depth + 1)?),
            _ => None,
        };
        let count = self.small(1 << 24, "rule count")? as usize;
        let mut rules = Vec::with_capacity(count.min(1 << 16));
        for _ in 0..count {
            let from = self.small(u32::MAX as u128, "state")? as u32;
            let input = self.pat(4)?;
            let work = (0..tapes).map(|_| self.pat(5)).collect::<Result<Vec<_>, _>>()?;
            let to = self.small(u32::MAX as u128, "state")? as u32;
            let writes = (0..tapes)
                .map(|_| {
                    Ok(match self.small(5, "write")? {
                        0 => Write::Keep,
                        n => Write::Put(Sym::from_index(n - 1).unwrap()),
                    })
                })
                .collect::<Result<Vec<_>, MachineError>>()?;
            let moves = (0..tapes)
                .map(|_| {
                    Ok(match self.small(2, "move")? {
                        0 => Move::L,
                        1 => Move::R,
                        _ => Move::S,
                    })
                })
                .collect::<Result<Vec<_>, MachineError>>()?;
            let in_move = match self.small(1, "input move")? {
                0 => InMove::R,
                _ => InMove::S,
            };
            let out = match self.small(2, "output")? {
                0 => None,
                1 => Some(false),
                _ => Some(true),
            };
            rules.push(Rule { from, input, work, to, writes, moves, in_move, out });
        }
        let bound = PolyBound::new(a, k)?;
        let p = Program::new(states, tapes, bound, discipline, rules)?;
        match inner {
            None => Ok(p),
            Some(inner) => {
                let expect = ex_transform(&inner);
                if expect.rules() != p.rules()
                    || expect.states() != p.states()
                    || expect.tapes() != p.tapes()
                    || expect.bound() != p.bound()
                    || expect.discipline() != p.discipline()
                {
                    return Err(bad("wrapped table is not the transform of its inner program"));
                }
                Ok(p.with_wrapped(Arc::new(inner)))
            }
        }
    }
}

/// Decodes a program code; anything but a canonical code is an error.
pub fn deserialize(w: &Word) -> Result<Program, MachineError> {
    if w.len() > MAX_BITS {
        return Err(bad("code too long"));
    }
    let mut r = Reader { bits: w.to_bits(), pos: 0 };
    let p = r.program(0)?;
    if r.pos != r.bits.len() {
        return Err(bad("trailing bits"));
    }
    Ok(p)
}
