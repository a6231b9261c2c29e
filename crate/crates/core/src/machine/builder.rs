use super::{Discipline, InMove, MachineError, Move, Pat, PolyBound, Program, Rule, Sym, Write};

/// Incremental construction of rule tables.
pub struct ProgramBuilder {
    tapes: usize,
    next: u32,
    rules: Vec<Rule>,
}

impl ProgramBuilder {
    pub fn new(tapes: usize) -> ProgramBuilder {
        ProgramBuilder { tapes, next: 3, rules: Vec::new() }
    }

    pub fn tapes(&self) -> usize {
        self.tapes
    }

    /// A fresh state id.
    pub fn state(&mut self) -> u32 {
        let s = self.next;
        self.next += 1;
        s
    }

    pub fn rule(&mut self, from: u32, to: u32) -> RuleBuilder<'_> {
        let t = self.tapes;
        RuleBuilder {
            owner: self,
            rule: Rule {
                from,
                input: Pat::Any,
                work: vec![Pat::Any; t],
                to,
                writes: vec![Write::Keep; t],
                moves: vec![Move::S; t],
                in_move: InMove::S,
                out: None,
            },
        }
    }

    pub fn push(&mut self, r: Rule) {
        self.rules.push(r);
    }

    pub fn finish(self, bound: PolyBound, discipline: Discipline) -> Result<Program, MachineError> {
        Program::new(self.next, self.tapes, bound, discipline, self.rules)
    }
}

pub struct RuleBuilder<'a> {
    owner: &'a mut ProgramBuilder,
    rule: Rule,
}

impl RuleBuilder<'_> {
    pub fn input(mut self, s: Sym) -> Self {
        self.rule.input = Pat::Is(s);
        self
    }

    pub fn on(mut self, tape: usize, s: Sym) -> Self {
        self.rule.work[tape] = Pat::Is(s);
        self
    }

    pub fn pat(mut self, tape: usize, p: Pat) -> Self {
        self.rule.work[tape] = p;
        self
    }

    pub fn input_pat(mut self, p: Pat) -> Self {
        self.rule.input = p;
        self
    }

    pub fn write(mut self, tape: usize, w: Write) -> Self {
        self.rule.writes[tape] = w;
        self
    }

    pub fn put(mut self, tape: usize, s: Sym) -> Self {
        self.rule.writes[tape] = Write::Put(s);
        self
    }

    pub fn mv(mut self, tape: usize, m: Move) -> Self {
        self.rule.moves[tape] = m;
        self
    }

    pub fn advance(mut self) -> Self {
        self.rule.in_move = InMove::R;
        self
    }

    pub fn emit(mut self, bit: bool) -> Self {
        self.rule.out = Some(bit);
        self
    }

    pub fn output(mut self, out: Option<bool>) -> Self {
        self.rule.out = out;
        self
    }

    pub fn in_move(mut self, m: InMove) -> Self {
        self.rule.in_move = m;
        self
    }

    pub fn add(self) {
        self.owner.rules.push(self.rule);
    }
}
