//! `w -> ex(w)`.
//!
//! `ex(w)` maps `0^h 1 u v` to `0^h 1 w(u) v` for `h >= 1` and `u` in the
//! domain code of `w`, so under `code` it carries `(00)^h 01 code(u) 11 v`
//! to `(00)^h 01 code(w(u)) 11 v`. It echoes the zero block, echoes the
//! `1` without moving past it and then runs `w` with that `1` standing in
//! for `#`. Two copies of `w`'s states are used: the A-copy while the
//! input head is still on the stand-in, the B-copy afterwards.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::builder::ProgramBuilder;
use super::{Discipline, InMove, Pat, PolyBound, Program, Rule, Sym, COPY, INITIAL, Q_OUT};

/// `(max{12, ceil(a / 2^k) + 1}, ceil(k / 2))`.
pub fn ex_bound(b: PolyBound) -> PolyBound {
    let a = b.a() as u128;
    let ceil = if b.k() >= 100 { 1 } else { a.div_ceil(1u128 << b.k()) };
    let ae = (ceil + 1).max(12);
    PolyBound::new(ae as u64, b.k().div_ceil(2)).expect("positive bound")
}

/// A- and B-copies of `w`'s non-reserved states, with the stand-in for `#`
/// being the input letter `stand_in`.
pub(crate) struct Copies {
    pub a: BTreeMap<u32, u32>,
    pub b: BTreeMap<u32, u32>,
}

pub(crate) fn alloc_copies(b: &mut ProgramBuilder, w: &Program) -> Copies {
    let mut a_of = BTreeMap::new();
    let mut b_of = BTreeMap::new();
    for s in std::iter::once(INITIAL).chain(3..w.states()) {
        a_of.insert(s, b.state());
        b_of.insert(s, b.state());
    }
    Copies { a: a_of, b: b_of }
}

/// The rules of `w` that can fire while the head is on `#`, rekeyed to
/// read `stand_in` instead.
pub(crate) fn a_rules(w: &Program, s: u32, stand_in: Sym) -> impl Iterator<Item = Rule> + '_ {
    w.rules_from(s).filter(|r| r.input.matches(Sym::Hash)).map(move |r| {
        let mut r = r.clone();
        r.input = Pat::Is(stand_in);
        r
    })
}

/// The rules of `w` that can fire once the head has left `#`.
pub(crate) fn b_rules(w: &Program, s: u32) -> impl Iterator<Item = &Rule> + '_ {
    w.rules_from(s).filter(|r| r.input != Pat::Is(Sym::Hash))
}

pub fn ex_transform(w: &Program) -> Program {
    let mut b = ProgramBuilder::new(w.tapes());
    let e1 = b.state();
    let e2 = b.state();
    let skip = b.state();
    let c = alloc_copies(&mut b, w);

    b.rule(INITIAL, e1).input(Sym::Hash).advance().add();
    b.rule(e1, e2).input(Sym::Zero).advance().emit(false).add();
    b.rule(e2, e2).input(Sym::Zero).advance().emit(false).add();
    b.rule(e2, c.a[&INITIAL]).input(Sym::One).emit(true).add();
    // w entering its copy device on '#' steps over it first
    b.rule(skip, COPY).advance().add();

    for &s in c.a.keys() {
        for mut r in a_rules(w, s, Sym::One) {
            r.from = c.a[&s];
            r.to = match (r.to, r.in_move) {
                (Q_OUT, _) => Q_OUT,
                (COPY, InMove::S) => skip,
                (COPY, InMove::R) => COPY,
                (t, InMove::S) => c.a[&t],
                (t, InMove::R) => c.b[&t],
            };
            b.push(r);
        }
        for r in b_rules(w, s) {
            let mut r = r.clone();
            r.from = c.b[&s];
            r.to = match r.to {
                Q_OUT => Q_OUT,
                COPY => COPY,
                t => c.b[&t],
            };
            b.push(r);
        }
    }
    b.finish(ex_bound(w.bound()), Discipline::Rm)
        .expect("transform of a valid program is valid")
        .with_wrapped(Arc::new(w.clone()))
}
