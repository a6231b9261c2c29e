use super::{InMove, Move, Program, Sym, Write, COPY, Q_OUT};
use crate::word::{Word, WordBuilder};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Reason {
    BudgetExceeded,
    HaltedNotQout,
    BalanceViolated,
}

impl Reason {
    pub fn name(self) -> &'static str {
        match self {
            Reason::BudgetExceeded => "budget_exceeded",
            Reason::HaltedNotQout => "halted_not_qout",
            Reason::BalanceViolated => "balance_violated",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RunOutcome {
    Output { y: Word, steps: u128 },
    Undefined(Reason),
}

impl RunOutcome {
    pub fn output(&self) -> Option<&Word> {
        match self {
            RunOutcome::Output { y, .. } => Some(y),
            RunOutcome::Undefined(_) => None,
        }
    }

    pub fn into_output(self) -> Option<Word> {
        match self {
            RunOutcome::Output { y, .. } => Some(y),
            RunOutcome::Undefined(_) => None,
        }
    }
}

/// A run together with what the input head did.
#[derive(Clone, Debug)]
pub struct RunReport {
    pub outcome: RunOutcome,
    /// Simulated steps, also when the run is undefined.
    pub steps: u128,
    /// Input position when the copy device was first entered.
    pub copy_entry: Option<u128>,
    /// Furthest input position read by a rule before the copy device.
    pub max_read_before_copy: Option<u128>,
    /// Output written before the first read at or past the probe position.
    pub snapshot: Option<Word>,
}

struct Tape {
    right: Vec<Sym>,
    left: Vec<Sym>,
    head: i64,
}

impl Tape {
    fn new() -> Tape {
        Tape { right: Vec::new(), left: Vec::new(), head: 0 }
    }

    fn get(&self) -> Sym {
        let h = self.head;
        let cell = if h >= 0 { self.right.get(h as usize) } else { self.left.get((-h - 1) as usize) };
        cell.copied().unwrap_or(Sym::Blank)
    }

    fn set(&mut self, s: Sym) {
        let h = self.head;
        let (v, i) = if h >= 0 { (&mut self.right, h as usize) } else { (&mut self.left, (-h - 1) as usize) };
        if i >= v.len() {
            if s == Sym::Blank {
                return;
            }
            v.resize(i + 1, Sym::Blank);
        }
        v[i] = s;
    }

    fn shift(&mut self, m: Move) {
        match m {
            Move::L => self.head -= 1,
            Move::R => self.head += 1,
            Move::S => {}
        }
    }
}

pub fn run(p: &Program, x: &Word) -> RunOutcome {
    run_traced(p, x, None).outcome
}

/// Runs `p` on `# x B`. With `probe = Some(b)` the output is captured at
/// the first read of an input position `>= b`.
pub fn run_traced(p: &Program, x: &Word, probe: Option<u128>) -> RunReport {
    let n = x.len();
    let budget = p.bound().eval(n);
    let idx = x.run_index();
    let sym_at = |pos: u128| -> Sym {
        if pos == 0 {
            Sym::Hash
        } else {
            idx.bit_at(pos - 1).map(Sym::bit).unwrap_or(Sym::Blank)
        }
    };
    let mut tapes: Vec<Tape> = (0..p.tapes()).map(|_| Tape::new()).collect();
    let mut work = vec![Sym::Blank; p.tapes()];
    let mut out = WordBuilder::new();
    let mut state = 0u32;
    let mut pos = 0u128;
    let mut steps = 0u128;
    let mut copy_entry = None;
    let mut max_read: Option<u128> = None;
    let mut snapshot: Option<Word> = None;

    macro_rules! finish {
        ($outcome:expr) => {
            return RunReport {
                outcome: $outcome,
                steps,
                copy_entry,
                max_read_before_copy: max_read,
                snapshot,
            }
        };
    }

    loop {
        if state == Q_OUT {
            let y = out.finish();
            let ok = y.len() <= budget && n <= p.bound().eval(y.len());
            if ok {
                finish!(RunOutcome::Output { y, steps });
            }
            finish!(RunOutcome::Undefined(Reason::BalanceViolated));
        }
        if state == COPY {
            if copy_entry.is_none() {
                copy_entry = Some(pos);
            }
            note(probe, pos, &out, None, &mut snapshot);
            if pos == 0 {
                if steps == budget {
                    finish!(RunOutcome::Undefined(Reason::BudgetExceeded));
                }
                steps += 1;
                pos = 1;
                continue;
            }
            if pos > n {
                state = Q_OUT;
                continue;
            }
            let mut end = n;
            if let Some(b) = probe {
                if pos < b && b <= n {
                    end = b - 1;
                }
            }
            let count = end - pos + 1;
            let room = budget - steps;
            if count > room {
                steps = budget;
                finish!(RunOutcome::Undefined(Reason::BudgetExceeded));
            }
            out.push_word(&x.slice(pos - 1, end));
            steps += count;
            pos = end + 1;
            continue;
        }

        let input = sym_at(pos);
        for (w, t) in work.iter_mut().zip(&tapes) {
            *w = t.get();
        }
        let Some(rule) = p.first_match(state, input, &work) else {
            // halting still inspected the symbol under the head
            max_read = Some(max_read.map_or(pos, |m| m.max(pos)));
            finish!(RunOutcome::Undefined(Reason::HaltedNotQout));
        };
        if steps == budget {
            finish!(RunOutcome::Undefined(Reason::BudgetExceeded));
        }
        let mut reps = 1u128;
        if input == Sym::Zero && rule.skips_zeros() {
            let (_, zeros) = idx.run_at(pos - 1).expect("input zero inside the word");
            let mut cap = zeros.min(budget - steps);
            if let Some(b) = probe {
                if pos < b {
                    cap = cap.min(b - pos);
                }
            }
            reps = cap.max(1);
        }
        note(probe, pos + reps - 1, &out, Some(&mut max_read), &mut snapshot);

        for (i, t) in tapes.iter_mut().enumerate() {
            if let Write::Put(s) = rule.writes[i] {
                t.set(s);
            }
            t.shift(rule.moves[i]);
        }
        if let Some(bit) = rule.out {
            out.push_run(bit, reps);
        }
        steps += reps;
        if rule.in_move == InMove::R {
            pos += reps;
        }
        state = rule.to;
    }
}

fn note(
    probe: Option<u128>,
    pos: u128,
    out: &WordBuilder,
    max_read: Option<&mut Option<u128>>,
    snapshot: &mut Option<Word>,
) {
    if let Some(m) = max_read {
        *m = Some(m.map_or(pos, |v| v.max(pos)));
    }
    if let Some(b) = probe {
        if pos >= b && snapshot.is_none() {
            *snapshot = Some(out.clone().finish());
        }
    }
}

/// Whether `u` is an element of the domain code: `p` is defined on `u`,
/// never reads past `u` and enters the copy device right after it.
pub fn is_domc(p: &Program, u: &Word) -> bool {
    domc_image(p, u).is_some()
}

/// `f_p(u)` and the step count when `u` is in the domain code.
pub fn domc_image(p: &Program, u: &Word) -> Option<(Word, u128)> {
    let r = run_traced(p, u, None);
    let RunOutcome::Output { y, steps } = r.outcome else {
        return None;
    };
    let exact = r.copy_entry.map(|e| e.max(1)) == Some(u.len() + 1)
        && r.max_read_before_copy.is_none_or(|m| m <= u.len());
    exact.then_some((y, steps))
}

/// Length of the shortest prefix of `x` lying in the domain code of `p`.
pub fn domain_prefix(p: &Program, x: &Word) -> Option<u128> {
    let r = run_traced(p, x, None);
    if let (RunOutcome::Output { .. }, Some(j)) = (&r.outcome, r.copy_entry) {
        let l = (j.max(1) - 1).min(x.len());
        if is_domc(p, &x.prefix(l)) {
            return Some(l);
        }
    }
    if x.len() > 256 {
        return None;
    }
    (0..=x.len()).find(|&l| is_domc(p, &x.prefix(l)))
}

/// The domain code of `p` among words of length `<= max_len`, shortlex.
///
/// Breadth-first over prefixes; a prefix is dropped once `p` halts on it
/// without reading past it, since every extension then halts the same
/// way. Returns `None` when more than `node_limit` runs would be needed.
pub fn enumerate_domc(p: &Program, max_len: u128, node_limit: usize) -> Option<Vec<Word>> {
    search_domc(p, max_len, node_limit, usize::MAX)
}

/// The first `count` domain-code words in shortlex order, as far as the
/// search gets within its limits.
pub fn first_domc(p: &Program, max_len: u128, node_limit: usize, count: usize) -> Vec<Word> {
    search_domc(p, max_len, node_limit, count).unwrap_or_default()
}

fn search_domc(p: &Program, max_len: u128, node_limit: usize, count: usize) -> Option<Vec<Word>> {
    let mut found = Vec::new();
    let mut queue = std::collections::VecDeque::from([Word::empty()]);
    let mut runs = 0usize;
    while let Some(x) = queue.pop_front() {
        runs += 1;
        if runs > node_limit {
            return None;
        }
        let r = run_traced(p, &x, None);
        let n = x.len();
        let within = r.max_read_before_copy.is_none_or(|m| m <= n);
        match r.outcome {
            RunOutcome::Output { .. } if r.copy_entry.map(|e| e.max(1)) == Some(n + 1) && within => {
                found.push(x);
                if found.len() >= count {
                    break;
                }
                continue;
            }
            RunOutcome::Undefined(Reason::HaltedNotQout) if within => continue,
            _ => {}
        }
        if n < max_len {
            queue.push_back(x.concat(&Word::lit("0")));
            queue.push_back(x.concat(&Word::lit("1")));
        }
    }
    Some(found)
}
