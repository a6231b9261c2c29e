//! `f -> f_pref` as a program transformer.
//!
//! The closure machine copies the input one letter at a time into a
//! buffer tape `BUF = # x_1 .. x_i` and replays `p` on that buffer from
//! scratch for every `i = 0, 1, ...`. Each replay is clocked: counter
//! tapes `K_1..K_k` are loaded with `i` marks and a nested loop writes
//! `a i^k + a` marks on `CLK`, one of which is spent per simulated step.
//! Shadow tapes `S_j` mark the cells `p` visited on `W_j` so a rejected
//! replay can be wiped. When `p` reaches its output state, the balance
//! `i <= q(|y|)` is checked with the same loop, the buffered output is
//! emitted and the rest of the input is handed to the copy device.
//!
//! Tape layout: `W_1..W_t, S_1..S_t, BUF, OUT, CLK, K_1..K_k`.

use std::collections::BTreeMap;

use super::builder::ProgramBuilder;
use super::{Discipline, InMove, Move, Pat, PolyBound, Program, Sym, COPY, INITIAL, Q_OUT};

struct Layout {
    t: usize,
    k: usize,
}

impl Layout {
    fn s(&self, j: usize) -> usize {
        self.t + j
    }
    fn buf(&self) -> usize {
        2 * self.t
    }
    fn out(&self) -> usize {
        2 * self.t + 1
    }
    fn clk(&self) -> usize {
        2 * self.t + 2
    }
    fn kc(&self, j: usize) -> usize {
        2 * self.t + 3 + j
    }
    fn total(&self) -> usize {
        2 * self.t + 3 + self.k
    }
}

#[derive(Clone, Copy)]
enum Tick {
    /// Write one clock mark.
    Clock,
    /// Advance the buffer head; reaching the blank ends the loop early.
    Buffer { early: u32 },
}

const BITS: [Sym; 2] = [Sym::Zero, Sym::One];

fn tick(b: &mut ProgramBuilder, lay: &Layout, from: u32, to: u32, kind: Tick, bump: Option<usize>) {
    let r = match kind {
        Tick::Clock => b.rule(from, to).put(lay.clk(), Sym::X).mv(lay.clk(), Move::R),
        Tick::Buffer { early } => {
            b.rule(from, early).on(lay.buf(), Sym::Blank).add();
            b.rule(from, to).mv(lay.buf(), Move::R)
        }
    };
    match bump {
        Some(j) => r.mv(lay.kc(j), Move::R).add(),
        None => r.add(),
    }
}

/// `a` ticks, then `a` ticks per point of `[0,n)^k` where `n` is the
/// common length of the counters. Counters start and end on their first
/// mark.
fn generator(b: &mut ProgramBuilder, lay: &Layout, a: u64, kind: Tick, done: u32) -> u32 {
    let k = lay.k;
    let loops: Vec<u32> = (0..k).map(|_| b.state()).collect();
    let rews: Vec<u32> = (0..k).map(|_| b.state()).collect();
    let pre: Vec<u32> = (0..a).map(|_| b.state()).collect();
    let inner: Vec<u32> = (0..a).map(|_| b.state()).collect();
    for i in 0..a as usize {
        let next = if i + 1 < pre.len() { pre[i + 1] } else { loops[0] };
        tick(b, lay, pre[i], next, kind, None);
    }
    for j in 0..k {
        let deeper = if j + 1 < k { loops[j + 1] } else { inner[0] };
        b.rule(loops[j], deeper).on(lay.kc(j), Sym::X).add();
        b.rule(loops[j], rews[j]).on(lay.kc(j), Sym::Blank).mv(lay.kc(j), Move::L).add();
        b.rule(rews[j], rews[j]).on(lay.kc(j), Sym::X).mv(lay.kc(j), Move::L).add();
        if j == 0 {
            b.rule(rews[0], done).on(lay.kc(0), Sym::Blank).mv(lay.kc(0), Move::R).add();
        } else {
            b.rule(rews[j], loops[j - 1])
                .on(lay.kc(j), Sym::Blank)
                .mv(lay.kc(j), Move::R)
                .mv(lay.kc(j - 1), Move::R)
                .add();
        }
    }
    for i in 0..inner.len() {
        if i + 1 < inner.len() {
            tick(b, lay, inner[i], inner[i + 1], kind, None);
        } else {
            tick(b, lay, inner[i], loops[k - 1], kind, Some(k - 1));
        }
    }
    pre[0]
}

/// Erases every counter. Each head must sit on a mark or, for an empty
/// counter, on the blank where the marks would start.
fn clear_counters(b: &mut ProgramBuilder, lay: &Layout, next: u32) -> u32 {
    let mut entry = next;
    for j in (0..lay.k).rev() {
        let left = b.state();
        let sweep = b.state();
        b.rule(left, left).on(lay.kc(j), Sym::X).mv(lay.kc(j), Move::L).add();
        b.rule(left, sweep).mv(lay.kc(j), Move::R).add();
        b.rule(sweep, sweep).on(lay.kc(j), Sym::X).put(lay.kc(j), Sym::Blank).mv(lay.kc(j), Move::R).add();
        b.rule(sweep, entry).add();
        entry = left;
    }
    entry
}

/// Moves all counters (equal contents, heads just past the marks) back to
/// their first mark.
fn rewind_counters(b: &mut ProgramBuilder, lay: &Layout, next: u32) -> u32 {
    let step = b.state();
    let back = b.state();
    fn all<'a>(r: super::RuleBuilder<'a>, lay: &Layout, m: Move) -> super::RuleBuilder<'a> {
        (0..lay.k).fold(r, |r, j| r.mv(lay.kc(j), m))
    }
    all(b.rule(step, back), lay, Move::L).add();
    all(b.rule(back, back).on(lay.kc(0), Sym::X), lay, Move::L).add();
    all(b.rule(back, next), lay, Move::R).add();
    step
}

/// Rewinds a tape holding bits from its origin, head just past the bits.
fn rewind_bits(b: &mut ProgramBuilder, tape: usize, next: u32) -> u32 {
    let step = b.state();
    let back = b.state();
    b.rule(step, back).mv(tape, Move::L).add();
    b.rule(back, next).on(tape, Sym::Blank).mv(tape, Move::R).add();
    b.rule(back, back).mv(tape, Move::L).add();
    step
}

/// Bound of the closure of a program with bound `(a,k)` and `t` tapes:
/// `(16 C a, 2k)` with `C = 10k + 2t + 18`, which covers `n+1` rounds of
/// at most `C (q(n) + n + 4)` steps each plus the final copy.
pub fn prefix_closure_bound(p: &Program) -> PolyBound {
    let c = 10 * p.bound().k() as u64 + 2 * p.tapes() as u64 + 18;
    let a = 16u64.saturating_mul(c).saturating_mul(p.bound().a());
    PolyBound::new(a, 2 * p.bound().k()).expect("positive bound")
}

/// A program for `f_pref`: on `x` it finds the shortest prefix `u` in the
/// domain of `p` and outputs `p(u)` followed by the rest of `x`.
pub fn prefix_closure(p: &Program) -> Program {
    let lay = Layout { t: p.tapes(), k: p.bound().k() as usize };
    let a = p.bound().a();
    let (buf, out, clk) = (lay.buf(), lay.out(), lay.clk());
    let mut b = ProgramBuilder::new(lay.total());

    let round = b.state();
    let load = b.state();
    let lrew = b.state();
    let rej = b.state();
    let acc = b.state();
    let scopy = b.state();
    let dead = b.state();
    let mut sim: BTreeMap<u32, u32> = BTreeMap::new();
    for s in std::iter::once(INITIAL).chain(3..p.states()) {
        sim.insert(s, b.state());
    }
    let target = |s: u32| match s {
        Q_OUT => acc,
        COPY => scopy,
        s => sim[&s],
    };

    // round setup: counters get |BUF| marks, the clock gets q(|BUF|)
    let clkrew = rewind_bits(&mut b, clk, sim[&INITIAL]);
    let clr = clear_counters(&mut b, &lay, clkrew);
    let gen = generator(&mut b, &lay, a, Tick::Clock, clr);
    let krew = rewind_counters(&mut b, &lay, gen);

    b.rule(INITIAL, round).put(buf, Sym::Hash).add();
    b.rule(round, load).mv(buf, Move::R).add();
    for bit in BITS {
        let r = b.rule(load, load).on(buf, bit).mv(buf, Move::R);
        (0..lay.k).fold(r, |r, j| r.put(lay.kc(j), Sym::X).mv(lay.kc(j), Move::R)).add();
    }
    b.rule(load, lrew).on(buf, Sym::Blank).mv(buf, Move::L).add();
    b.rule(lrew, krew).on(buf, Sym::Hash).add();
    b.rule(lrew, lrew).mv(buf, Move::L).add();

    // replay p, one clock mark per step
    for (&s, &from) in &sim {
        for r in p.rules_from(s) {
            let mut rb = b.rule(from, target(r.to)).input_pat(Pat::Any).pat(buf, r.input).on(clk, Sym::X);
            rb = rb.put(clk, Sym::Blank).mv(clk, Move::R);
            for j in 0..lay.t {
                rb = rb.pat(j, r.work[j]).write(j, r.writes[j]).mv(j, r.moves[j]);
                rb = rb.put(lay.s(j), Sym::X).mv(lay.s(j), r.moves[j]);
            }
            if r.in_move == InMove::R {
                rb = rb.mv(buf, Move::R);
            }
            if let Some(bit) = r.out {
                rb = rb.put(out, Sym::bit(bit)).mv(out, Move::R);
            }
            rb.add();
        }
        b.rule(from, rej).add();
    }
    b.rule(scopy, acc).on(buf, Sym::Blank).add();
    b.rule(scopy, scopy)
        .on(buf, Sym::Hash)
        .on(clk, Sym::X)
        .put(clk, Sym::Blank)
        .mv(clk, Move::R)
        .mv(buf, Move::R)
        .add();
    for bit in BITS {
        b.rule(scopy, scopy)
            .on(buf, bit)
            .on(clk, Sym::X)
            .put(clk, Sym::Blank)
            .mv(clk, Move::R)
            .put(out, bit)
            .mv(out, Move::R)
            .mv(buf, Move::R)
            .add();
    }
    b.rule(scopy, rej).add();

    // rejection: wipe W/S, OUT and CLK, then extend the buffer by one letter
    let wipe: Vec<(u32, u32)> = (0..lay.t).map(|_| (b.state(), b.state())).collect();
    let oc = b.state();
    let cc = b.state();
    let be1 = b.state();
    let be2 = b.state();
    let rd = b.state();
    let rd2 = b.state();
    let brew = b.state();
    let oc_entry = rewind_bits(&mut b, out, oc);
    {
        let r = b.rule(rej, wipe.first().map_or(oc_entry, |w| w.0));
        (0..lay.t).fold(r, |r, j| r.put(lay.s(j), Sym::X)).add();
    }
    for j in 0..lay.t {
        let (left, sweep) = wipe[j];
        let next = wipe.get(j + 1).map_or(oc_entry, |w| w.0);
        let sj = lay.s(j);
        b.rule(left, left).on(sj, Sym::X).mv(j, Move::L).mv(sj, Move::L).add();
        b.rule(left, sweep).mv(j, Move::R).mv(sj, Move::R).add();
        b.rule(sweep, sweep)
            .on(sj, Sym::X)
            .put(j, Sym::Blank)
            .put(sj, Sym::Blank)
            .mv(j, Move::R)
            .mv(sj, Move::R)
            .add();
        b.rule(sweep, next).add();
    }
    b.rule(oc, cc).on(out, Sym::Blank).add();
    b.rule(oc, oc).put(out, Sym::Blank).mv(out, Move::R).add();
    b.rule(cc, cc).on(clk, Sym::X).put(clk, Sym::Blank).mv(clk, Move::R).add();
    b.rule(cc, be1).add();
    b.rule(be1, be2).on(buf, Sym::Blank).add();
    b.rule(be1, be1).mv(buf, Move::R).add();
    b.rule(be2, be2).on(buf, Sym::Blank).mv(buf, Move::L).add();
    b.rule(be2, rd).mv(buf, Move::R).add();
    b.rule(rd, rd2).advance().add();
    for bit in BITS {
        b.rule(rd2, brew).input(bit).put(buf, bit).mv(buf, Move::L).add();
    }
    b.rule(rd2, dead).input(Sym::Blank).add();
    b.rule(brew, round).on(buf, Sym::Hash).add();
    b.rule(brew, brew).mv(buf, Move::L).add();

    // acceptance: check |BUF| <= q(|OUT|), then emit OUT and copy the rest
    let emit = b.state();
    let emit_entry = rewind_bits(&mut b, out, emit);
    let clr_ok = clear_counters(&mut b, &lay, emit_entry);
    let clr_fail = clear_counters(&mut b, &lay, rej);
    let balchk = b.state();
    let gen_bal = generator(&mut b, &lay, a, Tick::Buffer { early: clr_ok }, balchk);
    let ab = b.state();
    let krew2 = rewind_counters(&mut b, &lay, ab);
    let al = b.state();
    let al_entry = rewind_bits(&mut b, out, al);
    b.rule(acc, acc).on(clk, Sym::X).put(clk, Sym::Blank).mv(clk, Move::R).add();
    b.rule(acc, al_entry).add();
    b.rule(al, krew2).on(out, Sym::Blank).add();
    {
        let r = b.rule(al, al).mv(out, Move::R);
        (0..lay.k).fold(r, |r, j| r.put(lay.kc(j), Sym::X).mv(lay.kc(j), Move::R)).add();
    }
    b.rule(ab, gen_bal).on(buf, Sym::Hash).mv(buf, Move::R).add();
    b.rule(ab, ab).mv(buf, Move::L).add();
    b.rule(balchk, clr_ok).on(buf, Sym::Blank).add();
    b.rule(balchk, clr_fail).add();
    b.rule(emit, COPY).on(out, Sym::Blank).advance().add();
    for bit in BITS {
        b.rule(emit, emit).on(out, bit).put(out, Sym::Blank).mv(out, Move::R).emit(bit == Sym::One).add();
    }

    b.finish(prefix_closure_bound(p), Discipline::Rm).expect("closure construction is well formed")
}
