//! Small hand-built programs used by tests, suites and the CLI.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::machine::{Discipline, Move, PolyBound, Program, ProgramBuilder, Sym, COPY, INITIAL, Q_OUT};
use crate::word::{code, Word};

fn bound(a: u64, k: u32) -> PolyBound {
    PolyBound::new(a, k).expect("fixture bounds are positive")
}

/// Steps over `#` and copies the input: `x -> x`, domain code `{ε}`.
pub fn identity() -> Program {
    let mut b = ProgramBuilder::new(1);
    b.rule(INITIAL, COPY).input(Sym::Hash).advance().add();
    b.finish(bound(1, 1), Discipline::Rm).unwrap()
}

/// Spins in place forever.
pub fn divergent() -> Program {
    let mut b = ProgramBuilder::new(1);
    b.rule(INITIAL, INITIAL).add();
    b.finish(bound(1, 1), Discipline::Plain).unwrap()
}

/// `x -> x1`, echoing as it reads. Sequential but not a right-ideal map.
pub fn append_one() -> Program {
    let mut b = ProgramBuilder::new(1);
    let s = b.state();
    b.rule(INITIAL, s).input(Sym::Hash).advance().add();
    b.rule(s, s).input(Sym::Zero).emit(false).advance().add();
    b.rule(s, s).input(Sym::One).emit(true).advance().add();
    b.rule(s, Q_OUT).input(Sym::Blank).emit(true).add();
    b.finish(bound(2, 1), Discipline::Sequential).unwrap()
}

/// `x -> 1` after reading all of `x`; neither sequential nor right-ideal.
pub fn read_all_then_one() -> Program {
    let mut b = ProgramBuilder::new(1);
    let s = b.state();
    b.rule(INITIAL, s).input(Sym::Hash).advance().add();
    b.rule(s, Q_OUT).input(Sym::Blank).emit(true).add();
    b.rule(s, s).advance().add();
    b.finish(bound(20, 1), Discipline::Plain).unwrap()
}

/// Identity on `00 A*`: reads two zeros and copies.
pub fn identity_on_00() -> Program {
    let mut b = ProgramBuilder::new(1);
    let s1 = b.state();
    let s2 = b.state();
    b.rule(INITIAL, s1).input(Sym::Hash).advance().add();
    b.rule(s1, s2).input(Sym::Zero).emit(false).advance().add();
    b.rule(s2, COPY).input(Sym::Zero).emit(false).advance().add();
    b.finish(bound(2, 1), Discipline::Rm).unwrap()
}

/// Values of a witness machine on its domain code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WitnessKind {
    /// `u -> u`.
    Identity,
    /// `u -> 1 0^{|u|-1}`.
    ConstHead,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Pos {
    Block(usize),
    Tail(usize),
    Accept,
}

/// Deterministic automaton for `(blk)+ tail` read letter by letter.
struct Dfa {
    states: Vec<BTreeSet<Pos>>,
    /// `(from, bit) -> to`, `None` for accept.
    delta: BTreeMap<(usize, bool), Option<usize>>,
}

fn dfa(blk: &[bool], tail: &[bool]) -> Dfa {
    let close = |set: BTreeSet<Pos>| -> BTreeSet<Pos> {
        let mut out = BTreeSet::new();
        for p in set {
            match p {
                Pos::Block(i) if i == blk.len() => {
                    out.insert(Pos::Block(0));
                    out.insert(if tail.is_empty() { Pos::Accept } else { Pos::Tail(0) });
                }
                Pos::Tail(i) if i == tail.len() => {
                    out.insert(Pos::Accept);
                }
                p => {
                    out.insert(p);
                }
            }
        }
        out
    };
    let step = |set: &BTreeSet<Pos>, x: bool| -> BTreeSet<Pos> {
        let mut next = BTreeSet::new();
        for &p in set {
            match p {
                Pos::Block(i) if blk[i] == x => {
                    next.insert(Pos::Block(i + 1));
                }
                Pos::Tail(i) if tail[i] == x => {
                    next.insert(Pos::Tail(i + 1));
                }
                _ => {}
            }
        }
        close(next)
    };
    let start: BTreeSet<Pos> = [Pos::Block(0)].into();
    let mut states = vec![start.clone()];
    let mut index = BTreeMap::from([(start, 0usize)]);
    let mut delta = BTreeMap::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(d) = queue.pop_front() {
        for x in [false, true] {
            let n = step(&states[d], x);
            if n.is_empty() {
                continue;
            }
            if n.contains(&Pos::Accept) {
                delta.insert((d, x), None);
                continue;
            }
            let id = *index.entry(n.clone()).or_insert_with(|| {
                states.push(n);
                queue.push_back(states.len() - 1);
                states.len() - 1
            });
            delta.insert((d, x), Some(id));
        }
    }
    Dfa { states, delta }
}

/// A finite-state machine with domain code `{code(a)^n tail : n > 0}`.
/// Runs in `1 + |x|` steps on one untouched work tape.
pub fn witness(a: &Word, kind: WitnessKind, tail: &Word, q: PolyBound) -> Program {
    assert!(!a.is_empty(), "witness block must be non-empty");
    let blk = code(a).to_bits();
    let d = dfa(&blk, &tail.to_bits());
    let mut b = ProgramBuilder::new(1);
    let ids: Vec<u32> = d.states.iter().map(|_| b.state()).collect();
    b.rule(INITIAL, ids[0]).input(Sym::Hash).advance().add();
    for (&(from, x), &to) in &d.delta {
        let out = match kind {
            WitnessKind::Identity => x,
            WitnessKind::ConstHead => from == 0,
        };
        let target = to.map_or(COPY, |t| ids[t]);
        b.rule(ids[from], target).input(Sym::bit(x)).emit(out).advance().add();
    }
    b.finish(q, Discipline::Rm).unwrap()
}

/// The standard tail `0010`.
pub fn witness_tail() -> Word {
    Word::lit("0010")
}

/// `0^n 1 x -> 0^{2n^2} 1 x` with bound `(4,2)`.
///
/// Marks `n` cells on two tapes, then sweeps the second tape once per mark
/// on the first, emitting `00` per cell, alternating direction.
pub fn s_machine() -> Program {
    const T1: usize = 0;
    const T2: usize = 1;
    let mut b = ProgramBuilder::new(2);
    let read = b.state();
    let back = b.state();
    let outer_r = b.state();
    let outer_l = b.state();
    let fwd = b.state();
    let fwd2 = b.state();
    let bwd = b.state();
    let bwd2 = b.state();
    let done = b.state();

    b.rule(INITIAL, read).input(Sym::Hash).advance().add();
    b.rule(read, read)
        .input(Sym::Zero)
        .put(T1, Sym::X)
        .put(T2, Sym::X)
        .mv(T1, Move::R)
        .mv(T2, Move::R)
        .advance()
        .add();
    b.rule(read, back).input(Sym::One).mv(T1, Move::L).mv(T2, Move::L).add();
    b.rule(back, back).on(T1, Sym::X).mv(T1, Move::L).mv(T2, Move::L).add();
    b.rule(back, outer_r).mv(T1, Move::R).mv(T2, Move::R).add();

    b.rule(outer_r, fwd).on(T1, Sym::X).add();
    b.rule(outer_r, done).add();
    b.rule(fwd, fwd2).on(T2, Sym::X).emit(false).add();
    b.rule(fwd, outer_l).mv(T1, Move::R).mv(T2, Move::L).add();
    b.rule(fwd2, fwd).emit(false).mv(T2, Move::R).add();

    b.rule(outer_l, bwd).on(T1, Sym::X).add();
    b.rule(outer_l, done).add();
    b.rule(bwd, bwd2).on(T2, Sym::X).emit(false).add();
    b.rule(bwd, outer_r).mv(T1, Move::R).mv(T2, Move::R).add();
    b.rule(bwd2, bwd).emit(false).mv(T2, Move::L).add();

    b.rule(done, COPY).input(Sym::One).emit(true).advance().add();
    b.finish(bound(4, 2), Discipline::Rm).unwrap()
}

/// The witness programs over `a ∈ {1, 0, 10}` in both kinds with bounds
/// `(1,1)` and `(2,2)`.
pub fn witness_family() -> Vec<(String, Program)> {
    let mut out = Vec::new();
    for a in ["1", "0", "10"] {
        for kind in [WitnessKind::Identity, WitnessKind::ConstHead] {
            for (qa, qk) in [(1, 1), (2, 2)] {
                let tag = match kind {
                    WitnessKind::Identity => "id",
                    WitnessKind::ConstHead => "head",
                };
                let name = format!("witness-{tag}-{a}-({qa},{qk})");
                out.push((name, witness(&Word::lit(a), kind, &witness_tail(), bound(qa, qk))));
            }
        }
    }
    out
}
