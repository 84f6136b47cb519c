//! Learning tasks: weighted examples, hypotheses and scores.

use std::collections::HashSet;
use std::fmt;
use std::iter::Sum;
use std::ops::Add;

use crate::error::{Error, Result};
use crate::space::SpaceRule;
use crate::syntax::{Atom, CmpOp, Program};

/// Example penalty, hypothesis score, or any other quantity that may be
/// infinite. `Infinite` absorbs addition and compares above every finite value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Penalty {
    Finite(u64),
    Infinite,
}

pub type Score = Penalty;

impl Penalty {
    pub const ZERO: Penalty = Penalty::Finite(0);

    pub fn is_finite(self) -> bool {
        matches!(self, Penalty::Finite(_))
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            Penalty::Finite(v) => Some(v),
            Penalty::Infinite => None,
        }
    }
}

impl Default for Penalty {
    fn default() -> Self {
        Penalty::ZERO
    }
}

impl Add for Penalty {
    type Output = Penalty;
    fn add(self, rhs: Penalty) -> Penalty {
        match (self, rhs) {
            (Penalty::Finite(a), Penalty::Finite(b)) => Penalty::Finite(a.saturating_add(b)),
            _ => Penalty::Infinite,
        }
    }
}

impl Add<u64> for Penalty {
    type Output = Penalty;
    fn add(self, rhs: u64) -> Penalty {
        self + Penalty::Finite(rhs)
    }
}

impl Sum for Penalty {
    fn sum<I: Iterator<Item = Penalty>>(iter: I) -> Penalty {
        iter.fold(Penalty::ZERO, |a, b| a + b)
    }
}

impl fmt::Display for Penalty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Penalty::Finite(v) => write!(f, "{v}"),
            Penalty::Infinite => f.write_str("inf"),
        }
    }
}

/// Pair of atom sets that an answer set must include and exclude.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PartialInterpretation {
    pub inc: Vec<Atom>,
    pub exc: Vec<Atom>,
}

impl PartialInterpretation {
    pub fn new(inc: Vec<Atom>, exc: Vec<Atom>) -> Result<Self> {
        if let Some(a) = inc.iter().find(|a| exc.contains(a)) {
            return Err(Error::Task(format!(
                "atom {a} is both included and excluded"
            )));
        }
        if let Some(a) = inc.iter().chain(exc.iter()).find(|a| !a.is_ground()) {
            return Err(Error::Task(format!(
                "atom {a} in a partial interpretation is not ground"
            )));
        }
        Ok(PartialInterpretation { inc, exc })
    }

    pub fn empty() -> Self {
        PartialInterpretation::default()
    }
}

/// Context-dependent partial interpretation.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Cdpi {
    pub pi: PartialInterpretation,
    pub context: Program,
}

impl Cdpi {
    pub fn new(pi: PartialInterpretation, context: Program) -> Result<Self> {
        if context.has_weak_constraints() {
            return Err(Error::Task(
                "example contexts may not contain weak constraints".into(),
            ));
        }
        Ok(Cdpi { pi, context })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedCdpi {
    pub id: String,
    pub penalty: Penalty,
    pub cdpi: Cdpi,
}

/// Ordering example over two CDPIs. `first_ref`/`second_ref` name the
/// examples the CDPIs were taken from, when there are such examples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedCdoe {
    pub id: String,
    pub penalty: Penalty,
    pub first: Cdpi,
    pub second: Cdpi,
    pub op: CmpOp,
    pub first_ref: Option<String>,
    pub second_ref: Option<String>,
}

/// A learning task with weighted examples.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LearningTask {
    pub background: Program,
    pub space: Vec<SpaceRule>,
    pub positives: Vec<WeightedCdpi>,
    pub negatives: Vec<WeightedCdpi>,
    pub brave: Vec<WeightedCdoe>,
    pub cautious: Vec<WeightedCdoe>,
}

impl LearningTask {
    pub fn validate(&self) -> Result<()> {
        let mut ids = HashSet::new();
        let all_ids = self
            .positives
            .iter()
            .chain(&self.negatives)
            .map(|e| (&e.id, e.penalty))
            .chain(
                self.brave
                    .iter()
                    .chain(&self.cautious)
                    .map(|o| (&o.id, o.penalty)),
            );
        for (id, pen) in all_ids {
            if !ids.insert(id.as_str()) {
                return Err(Error::Task(format!("duplicate example identifier `{id}`")));
            }
            if pen == Penalty::Finite(0) {
                return Err(Error::Task(format!("example `{id}` has penalty 0")));
            }
        }
        for (i, r) in self.space.iter().enumerate() {
            if r.id != i {
                return Err(Error::Task(format!(
                    "space rule ids must be contiguous; found {} at {i}",
                    r.id
                )));
            }
        }
        Ok(())
    }

    pub fn num_examples(&self) -> usize {
        self.positives.len() + self.negatives.len() + self.brave.len() + self.cautious.len()
    }

    /// Rules of the hypothesis as a program.
    pub fn program(&self, h: &Hypothesis) -> Program {
        h.ids()
            .iter()
            .map(|&i| self.space[i].rule.clone())
            .collect()
    }

    pub fn length(&self, h: &Hypothesis) -> u64 {
        h.ids().iter().map(|&i| self.space[i].length).sum()
    }
}

/// A subset of the hypothesis space, as sorted rule ids.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hypothesis(Vec<usize>);

impl Hypothesis {
    pub fn new(mut ids: Vec<usize>) -> Self {
        ids.sort_unstable();
        ids.dedup();
        Hypothesis(ids)
    }

    pub fn empty() -> Self {
        Hypothesis(Vec::new())
    }

    pub fn ids(&self) -> &[usize] {
        &self.0
    }

    pub fn contains(&self, id: usize) -> bool {
        self.0.binary_search(&id).is_ok()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Rule texts, one per line, in id order.
    pub fn text(&self, space: &[SpaceRule]) -> String {
        self.0
            .iter()
            .map(|&i| space[i].rule.to_string())
            .collect::<Vec<_>>()
            .join("\n")
    }
}

impl FromIterator<usize> for Hypothesis {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        Hypothesis::new(iter.into_iter().collect())
    }
}

/// Coverage outcome of a hypothesis on a task.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverageReport {
    pub uncovered: Vec<String>,
    pub penalty: Penalty,
    pub length: u64,
    pub score: Score,
}

impl CoverageReport {
    pub fn new(uncovered: Vec<String>, penalty: Penalty, length: u64) -> Self {
        let score = match penalty {
            Penalty::Finite(p) => Penalty::Finite(p + length),
            Penalty::Infinite => Penalty::Infinite,
        };
        CoverageReport {
            uncovered,
            penalty,
            length,
            score,
        }
    }

    /// Whether the hypothesis is an inductive solution (finite score).
    pub fn is_solution(&self) -> bool {
        self.score.is_finite()
    }
}

/// Unweighted example of a task without penalties.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedCdpi {
    pub id: String,
    pub cdpi: Cdpi,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cdoe {
    pub id: String,
    pub first: Cdpi,
    pub second: Cdpi,
    pub op: CmpOp,
}

/// A learning task where every example must be covered.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ContextTask {
    pub background: Program,
    pub space: Vec<SpaceRule>,
    pub positives: Vec<NamedCdpi>,
    pub negatives: Vec<NamedCdpi>,
    pub brave: Vec<Cdoe>,
    pub cautious: Vec<Cdoe>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn penalty_arithmetic_absorbs_infinity() {
        assert_eq!(Penalty::Finite(2) + Penalty::Finite(3), Penalty::Finite(5));
        assert_eq!(Penalty::Finite(2) + Penalty::Infinite, Penalty::Infinite);
        assert!(Penalty::Finite(u64::MAX) < Penalty::Infinite);
        let total: Penalty = [Penalty::Finite(1), Penalty::Finite(1)].into_iter().sum();
        assert_eq!(total, Penalty::Finite(2));
        assert_eq!(Penalty::Infinite.to_string(), "inf");
    }

    #[test]
    fn report_score() {
        assert_eq!(
            CoverageReport::new(vec![], Penalty::Finite(1), 1).score,
            Penalty::Finite(2)
        );
        let r = CoverageReport::new(vec!["e".into()], Penalty::Infinite, 1);
        assert_eq!(r.score, Penalty::Infinite);
        assert!(!r.is_solution());
    }

    #[test]
    fn overlapping_partial_interpretation_is_rejected() {
        let a = Atom::prop("a");
        assert!(PartialInterpretation::new(vec![a.clone()], vec![a]).is_err());
    }
}
