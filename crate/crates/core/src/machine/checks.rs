//! Dynamic spot checks of the sequential and right-ideal disciplines.

use super::run::{run, run_traced, RunOutcome};
use super::Program;
use crate::word::Word;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub x: Word,
    pub z: Word,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DisciplineReport {
    /// Samples with `x` in the domain, i.e. actually checked.
    pub checked: usize,
    /// Samples skipped because `x` is outside the domain.
    pub skipped: usize,
    pub violations: Vec<Violation>,
}

impl DisciplineReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn show(o: Option<&Word>) -> String {
    o.map_or_else(|| "undefined".to_string(), |w| w.to_string())
}

fn check(p: &Program, samples: &[(Word, Word)], rm: bool) -> DisciplineReport {
    let mut rep = DisciplineReport::default();
    for (x, z) in samples {
        let Some(fx) = run(p, x).into_output() else {
            rep.skipped += 1;
            continue;
        };
        rep.checked += 1;
        let xz = x.concat(z);
        let r = run_traced(p, &xz, Some(x.len() + 1));
        let full = r.outcome.output();
        let mut fail = |detail: String| rep.violations.push(Violation { x: x.clone(), z: z.clone(), detail });
        let seen = r.snapshot.as_ref().or(full);
        if seen != Some(&fx) {
            fail(format!("output before reading past x is {}, expected {fx}", show(seen)));
            continue;
        }
        if !rm {
            continue;
        }
        let want = fx.concat(z);
        if full != Some(&want) {
            fail(format!("f(xz) = {}, expected f(x)z = {want}", show(full)));
            continue;
        }
        if let RunOutcome::Output { .. } = r.outcome {
            match r.copy_entry.map(|e| e.max(1)) {
                Some(e) if e <= x.len() + 1 => {}
                e => fail(format!("copy device entered at {e:?}, after the end of x")),
            }
        }
    }
    rep
}

/// The output written before the head reads past `x` must be `f(x)`.
pub fn check_sequential(p: &Program, samples: &[(Word, Word)]) -> DisciplineReport {
    check(p, samples, false)
}

/// Sequential, plus `f(xz) = f(x) z` with the tail handled by the copy
/// device.
pub fn check_rm(p: &Program, samples: &[(Word, Word)]) -> DisciplineReport {
    check(p, samples, true)
}
