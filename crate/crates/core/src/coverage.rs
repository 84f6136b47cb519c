//! Example coverage: acceptance of CDPIs, respect of ordering examples, and
//! hypothesis scoring.
//!
//! These functions ground and solve from scratch on every call. They are the
//! reference semantics; the learner uses a cached engine that must agree.

use std::collections::HashSet;

use crate::error::Result;
use crate::ground::{ground, AtomId, GroundProgram};
use crate::solve::{compare, cost, CostVector, Flow, Interpretation, Solver};
use crate::syntax::{CmpOp, Program};
use crate::task::{
    Cdpi, CoverageReport, Hypothesis, LearningTask, PartialInterpretation, Penalty, WeightedCdoe,
};

/// Whether `interp` contains every included atom and no excluded atom.
pub fn extends(gp: &GroundProgram, interp: &Interpretation, pi: &PartialInterpretation) -> bool {
    pi.inc
        .iter()
        .all(|a| gp.id_of(a).is_some_and(|id| interp.contains(id)))
        && pi
            .exc
            .iter()
            .all(|a| gp.id_of(a).is_none_or(|id| !interp.contains(id)))
}

/// Solver assumptions equivalent to `pi`, or `None` when an included atom
/// cannot occur in any answer set.
pub fn assumptions(gp: &GroundProgram, pi: &PartialInterpretation) -> Option<Vec<(AtomId, bool)>> {
    let mut out = Vec::with_capacity(pi.inc.len() + pi.exc.len());
    for a in &pi.inc {
        out.push((gp.id_of(a)?, true));
    }
    out.extend(
        pi.exc
            .iter()
            .filter_map(|a| gp.id_of(a))
            .map(|id| (id, false)),
    );
    Some(out)
}

fn ground_example(b: &Program, h: &Program, ctx: &Program) -> Result<GroundProgram> {
    ground(&Program::union([b, h, ctx]))
}

/// Answer sets of `gp` extending `pi`.
pub fn accepting_answer_sets(
    gp: &GroundProgram,
    pi: &PartialInterpretation,
    limit: Option<usize>,
) -> Vec<Interpretation> {
    let Some(assume) = assumptions(gp, pi) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    Solver::new(gp).enumerate(&assume, |m| {
        out.push(m);
        if limit.is_some_and(|l| out.len() >= l) {
            Flow::Stop
        } else {
            Flow::Continue
        }
    });
    out
}

/// Brave acceptance of a CDPI by `B ∪ H`.
pub fn accepts(b: &Program, h: &Program, e: &Cdpi) -> Result<bool> {
    let gp = ground_example(b, h, &e.context)?;
    Ok(!accepting_answer_sets(&gp, &e.pi, Some(1)).is_empty())
}

/// Distinct cost vectors of the accepting answer sets of `e`.
pub fn accepting_costs(b: &Program, h: &Program, e: &Cdpi) -> Result<Vec<CostVector>> {
    let gp = ground_example(b, h, &e.context)?;
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for m in accepting_answer_sets(&gp, &e.pi, None) {
        let c = cost(&gp, &m);
        if seen.insert(c.clone()) {
            out.push(c);
        }
    }
    Ok(out)
}

fn holds(a: &CostVector, b: &CostVector, op: CmpOp) -> bool {
    op.holds(compare(a, b).as_ordering())
}

/// Some pair of accepting answer sets is ordered by `op`.
pub fn respects_brave(b: &Program, h: &Program, o: &WeightedCdoe) -> Result<bool> {
    let first = accepting_costs(b, h, &o.first)?;
    let second = accepting_costs(b, h, &o.second)?;
    Ok(first
        .iter()
        .any(|c1| second.iter().any(|c2| holds(c1, c2, o.op))))
}

/// Every pair of accepting answer sets is ordered by `op`. Vacuously true
/// when either side has no accepting answer set.
pub fn respects_cautious(b: &Program, h: &Program, o: &WeightedCdoe) -> Result<bool> {
    let first = accepting_costs(b, h, &o.first)?;
    let second = accepting_costs(b, h, &o.second)?;
    if first.is_empty() || second.is_empty() {
        log::debug!("cautious ordering {} holds vacuously", o.id);
    }
    Ok(first
        .iter()
        .all(|c1| second.iter().all(|c2| holds(c1, c2, o.op))))
}

/// Uncovered examples (in task order: positives, negatives, brave, cautious),
/// their total penalty, the hypothesis length and the score.
pub fn score_hypothesis(task: &LearningTask, h: &Hypothesis) -> Result<CoverageReport> {
    let hp = task.program(h);
    let b = &task.background;
    let mut uncovered = Vec::new();
    let mut penalty = Penalty::ZERO;
    let mut miss = |id: &str, pen: Penalty| {
        uncovered.push(id.to_string());
        penalty = penalty + pen;
    };
    for e in &task.positives {
        if !accepts(b, &hp, &e.cdpi)? {
            miss(&e.id, e.penalty);
        }
    }
    for e in &task.negatives {
        if accepts(b, &hp, &e.cdpi)? {
            miss(&e.id, e.penalty);
        }
    }
    for o in &task.brave {
        if !respects_brave(b, &hp, o)? {
            miss(&o.id, o.penalty);
        }
    }
    for o in &task.cautious {
        if !respects_cautious(b, &hp, o)? {
            miss(&o.id, o.penalty);
        }
    }
    Ok(CoverageReport::new(uncovered, penalty, task.length(h)))
}
