//! Deterministic multi-tape transducers with a built-in polynomial bound.
//!
//! Tapes: a read-only input tape holding `# x B B ...` whose head moves
//! only right or stays, `tapes` two-way infinite work tapes over
//! `{0,1,#,B,X}`, and an append-only output tape.
//!
//! State 0 is initial and state 1 is the output state. State 2 is the
//! built-in copy device: entering it copies the rest of the input to the
//! output one letter per step and then moves to state 1 on the blank,
//! which costs no step. From position 0 it first steps over `#`.
//!
//! Rules are tried in table order and the first match fires, so a table
//! may end in wildcard catch-alls and stays deterministic.

mod builder;
mod checks;
mod closure;
mod ex;
mod gamma;
mod run;
mod serial;
mod text;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub use builder::{ProgramBuilder, RuleBuilder};
pub use checks::{check_rm, check_sequential, DisciplineReport, Violation};
pub use closure::{prefix_closure, prefix_closure_bound};
pub use ex::{ex_bound, ex_transform};
pub use gamma::gamma_program;
pub use run::{domain_prefix, domc_image, enumerate_domc, first_domc, is_domc, run, run_traced, Reason, RunOutcome, RunReport};
pub use serial::{deserialize, serialize};
pub use text::{parse_program, program_to_text};

pub const INITIAL: u32 = 0;
pub const Q_OUT: u32 = 1;
pub const COPY: u32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sym {
    Zero,
    One,
    Hash,
    Blank,
    X,
}

impl Sym {
    pub const ALL: [Sym; 5] = [Sym::Zero, Sym::One, Sym::Hash, Sym::Blank, Sym::X];

    pub fn bit(b: bool) -> Sym {
        if b {
            Sym::One
        } else {
            Sym::Zero
        }
    }

    pub fn as_bit(self) -> Option<bool> {
        match self {
            Sym::Zero => Some(false),
            Sym::One => Some(true),
            _ => None,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Sym::Zero => '0',
            Sym::One => '1',
            Sym::Hash => '#',
            Sym::Blank => 'B',
            Sym::X => 'X',
        }
    }

    pub fn from_char(c: char) -> Option<Sym> {
        Some(match c {
            '0' => Sym::Zero,
            '1' => Sym::One,
            '#' => Sym::Hash,
            'B' => Sym::Blank,
            'X' => Sym::X,
            _ => return None,
        })
    }

    fn index(self) -> u128 {
        self as u128
    }

    fn from_index(i: u128) -> Option<Sym> {
        Sym::ALL.get(i as usize).copied()
    }
}

/// A symbol pattern; `Any` is the wildcard.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pat {
    Is(Sym),
    Any,
}

impl Pat {
    pub fn matches(self, s: Sym) -> bool {
        match self {
            Pat::Is(t) => t == s,
            Pat::Any => true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Write {
    Keep,
    Put(Sym),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Move {
    L,
    R,
    S,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InMove {
    R,
    S,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rule {
    pub from: u32,
    pub input: Pat,
    pub work: Vec<Pat>,
    pub to: u32,
    pub writes: Vec<Write>,
    pub moves: Vec<Move>,
    pub in_move: InMove,
    pub out: Option<bool>,
}

impl Rule {
    fn matches(&self, input: Sym, work: &[Sym]) -> bool {
        self.input.matches(input) && self.work.iter().zip(work).all(|(p, s)| p.matches(*s))
    }

    /// A self-loop over input zeros that leaves the work tapes alone and
    /// emits nothing or zeros; the VM may fire it for a whole zero run.
    fn skips_zeros(&self) -> bool {
        self.from == self.to
            && self.input.matches(Sym::Zero)
            && self.in_move == InMove::R
            && self.out != Some(true)
            && self.writes.iter().all(|w| *w == Write::Keep)
            && self.moves.iter().all(|m| *m == Move::S)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundError {
    #[error("bound needs a >= 1 and k >= 1, got a={a} k={k}")]
    Invalid { a: u64, k: u32 },
}

/// `q(n) = a n^k + a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PolyBound {
    a: u64,
    k: u32,
}

impl PolyBound {
    pub fn new(a: u64, k: u32) -> Result<PolyBound, BoundError> {
        if a == 0 || k == 0 {
            return Err(BoundError::Invalid { a, k });
        }
        Ok(PolyBound { a, k })
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Saturates at `u128::MAX`.
    pub fn eval(&self, n: u128) -> u128 {
        let mut p: u128 = 1;
        for _ in 0..self.k {
            p = p.saturating_mul(n);
        }
        (self.a as u128).saturating_mul(p).saturating_add(self.a as u128)
    }

    /// Coefficient-wise comparison, which implies pointwise `<=`.
    pub fn within(&self, q: &PolyBound) -> bool {
        self.a <= q.a && self.k <= q.k
    }
}

impl fmt::Display for PolyBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.k)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Discipline {
    Plain,
    Sequential,
    Rm,
}

impl Discipline {
    pub fn name(self) -> &'static str {
        match self {
            Discipline::Plain => "plain",
            Discipline::Sequential => "sequential",
            Discipline::Rm => "rm",
        }
    }

    pub fn from_name(s: &str) -> Option<Discipline> {
        match s {
            "plain" => Some(Discipline::Plain),
            "sequential" => Some(Discipline::Sequential),
            "rm" => Some(Discipline::Rm),
            _ => None,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MachineError {
    #[error("a program needs at least 3 states, got {0}")]
    TooFewStates(u32),
    #[error("a program needs at least one work tape")]
    NoTapes,
    #[error("rule {0}: state out of range")]
    StateRange(usize),
    #[error("rule {0}: rules may not leave the output state or the copy state")]
    ReservedSource(usize),
    #[error("rule {0}: expected {1} work tapes")]
    Arity(usize, usize),
    #[error("rule {0}: the input tape never holds X")]
    InputX(usize),
    #[error(transparent)]
    Bound(#[from] BoundError),
    #[error("line {line}: {msg}")]
    Text { line: usize, msg: String },
    #[error("malformed program code: {0}")]
    Decode(String),
}

/// A validated transducer program.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Program {
    states: u32,
    tapes: usize,
    bound: PolyBound,
    discipline: Discipline,
    rules: Vec<Rule>,
    wrapped: Option<Arc<Program>>,
    by_state: Vec<Vec<u32>>,
}

impl Program {
    pub fn new(
        states: u32,
        tapes: usize,
        bound: PolyBound,
        discipline: Discipline,
        rules: Vec<Rule>,
    ) -> Result<Program, MachineError> {
        if states < 3 {
            return Err(MachineError::TooFewStates(states));
        }
        if tapes == 0 {
            return Err(MachineError::NoTapes);
        }
        for (i, r) in rules.iter().enumerate() {
            if r.from >= states || r.to >= states {
                return Err(MachineError::StateRange(i));
            }
            if r.from == Q_OUT || r.from == COPY {
                return Err(MachineError::ReservedSource(i));
            }
            if r.work.len() != tapes || r.writes.len() != tapes || r.moves.len() != tapes {
                return Err(MachineError::Arity(i, tapes));
            }
            if r.input == Pat::Is(Sym::X) {
                return Err(MachineError::InputX(i));
            }
        }
        let mut by_state = vec![Vec::new(); states as usize];
        for (i, r) in rules.iter().enumerate() {
            by_state[r.from as usize].push(i as u32);
        }
        Ok(Program { states, tapes, bound, discipline, rules, wrapped: None, by_state })
    }

    pub(crate) fn with_wrapped(mut self, inner: Arc<Program>) -> Program {
        self.wrapped = Some(inner);
        self
    }

    pub fn states(&self) -> u32 {
        self.states
    }

    pub fn tapes(&self) -> usize {
        self.tapes
    }

    pub fn bound(&self) -> PolyBound {
        self.bound
    }

    pub fn discipline(&self) -> Discipline {
        self.discipline
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    /// The program this one was produced from by [`ex_transform`], if any.
    pub fn wrapped(&self) -> Option<&Arc<Program>> {
        self.wrapped.as_ref()
    }

    pub fn rules_from(&self, s: u32) -> impl Iterator<Item = &Rule> {
        self.by_state[s as usize].iter().map(move |&i| &self.rules[i as usize])
    }

    fn first_match(&self, s: u32, input: Sym, work: &[Sym]) -> Option<&Rule> {
        self.rules_from(s).find(|r| r.matches(input, work))
    }

    /// Same table, different bound.
    pub fn rebound(&self, bound: PolyBound) -> Program {
        let mut p = self.clone();
        p.bound = bound;
        p.wrapped = None;
        p
    }

    /// Same table, different declared discipline.
    pub fn with_discipline(&self, d: Discipline) -> Program {
        let mut p = self.clone();
        p.discipline = d;
        p.wrapped = None;
        p
    }
}
