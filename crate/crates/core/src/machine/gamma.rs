//! The prefix extractor `γ_w` as a program.
//!
//! On `code(w) 11 u v` it echoes the header, then runs `w` with the last
//! header `1` standing in for `#` and `w`'s own output suppressed. Each
//! letter `c` the head leaves behind is echoed as `code(c)`. When `w`
//! reaches its copy device the program writes `11` and copies `v`.

use super::builder::ProgramBuilder;
use super::ex::{a_rules, alloc_copies, b_rules};
use super::{serialize, Discipline, InMove, Pat, PolyBound, Program, Sym, COPY, INITIAL, Q_OUT};
use crate::word::code;

pub fn gamma_program(w: &Program) -> Program {
    let mut header = code(&serialize(w)).to_bits();
    header.extend([true, true]);

    let mut b = ProgramBuilder::new(w.tapes());
    let echo: Vec<u32> = header.iter().map(|_| b.state()).collect();
    let c = alloc_copies(&mut b, w);
    // closing `11`, head after u / head still on the stand-in
    let f1 = b.state();
    let f2 = b.state();
    let f1a = b.state();
    let f2a = b.state();

    b.rule(INITIAL, echo[0]).input(Sym::Hash).advance().add();
    for (i, &bit) in header.iter().enumerate() {
        let from = echo[i];
        let last = i + 1 == header.len();
        let to = if last { c.a[&INITIAL] } else { echo[i + 1] };
        let r = b.rule(from, to).input(Sym::bit(bit)).emit(bit);
        if last {
            r.add();
        } else {
            r.advance().add();
        }
    }
    b.rule(f1, f2).emit(true).add();
    b.rule(f2, COPY).emit(true).add();
    b.rule(f1a, f2a).emit(true).add();
    b.rule(f2a, COPY).emit(true).advance().add();

    let mut echo_states = std::collections::BTreeMap::new();
    for &s in c.a.keys() {
        for mut r in a_rules(w, s, Sym::One) {
            r.from = c.a[&s];
            r.out = None;
            r.to = match (r.to, r.in_move) {
                (Q_OUT | COPY, InMove::S) => f1a,
                (Q_OUT | COPY, InMove::R) => f1,
                (t, InMove::S) => c.a[&t],
                (t, InMove::R) => c.b[&t],
            };
            b.push(r);
        }
        for r in b_rules(w, s) {
            let mut r = r.clone();
            r.from = c.b[&s];
            r.out = None;
            let target = match r.to {
                Q_OUT | COPY => f1,
                t => c.b[&t],
            };
            if r.in_move == InMove::S {
                r.to = target;
                b.push(r);
                continue;
            }
            let letters: Vec<Sym> = match r.input {
                Pat::Is(s) => vec![s],
                Pat::Any => vec![Sym::Zero, Sym::One, Sym::Blank],
            };
            for l in letters {
                let mut r = r.clone();
                r.input = Pat::Is(l);
                match l.as_bit() {
                    Some(bit) => {
                        let e = *echo_states.entry((target, bit)).or_insert_with(|| b.state());
                        r.to = e;
                        r.in_move = InMove::S;
                        r.out = Some(false);
                    }
                    None => r.to = target,
                }
                b.push(r);
            }
        }
    }
    for (&(target, bit), &e) in &echo_states {
        b.rule(e, target).emit(bit).advance().add();
    }
    let bound = PolyBound::new(w.bound().a().max(2), w.bound().k().max(2)).expect("positive bound");
    b.finish(bound, Discipline::Rm).expect("extractor program is valid")
}
