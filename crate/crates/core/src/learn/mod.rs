//! Optimal learning from weighted examples.
//!
//! [`solve_optimal`] refines a set of relevant examples. Each round proposes
//! the lexicographically first hypothesis of minimal score on the relevant
//! examples alone, then scores it on the whole task. When both scores agree
//! the proposal is optimal for the task. Otherwise the uncovered example
//! with the highest penalty joins the relevant set and the next round starts
//! from the previous proposal.

mod engine;
mod search;

use std::collections::{BTreeMap, HashSet};
use std::time::{Duration, Instant};

use crate::coverage::score_hypothesis;
use crate::error::{Error, Result};
use crate::task::{
    Cdoe, ContextTask, CoverageReport, Hypothesis, LearningTask, NamedCdpi, Penalty, Score,
    WeightedCdoe, WeightedCdpi,
};

use engine::Engine;
use search::{Layout, Limits, Proposer};

/// Resource caps for [`solve_optimal`]. Exhausting one returns the best
/// hypothesis found so far without an optimality certificate.
#[derive(Clone, Copy, Debug, Default)]
pub struct LearnOptions {
    pub time_budget: Option<Duration>,
    /// Cap on search nodes over all rounds. Unlike the time budget this
    /// keeps runs reproducible.
    pub node_budget: Option<u64>,
    pub max_iterations: Option<usize>,
}

/// One round of the refinement loop.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Progress {
    pub iteration: usize,
    pub relevant: usize,
    pub incumbent: Score,
    pub lower_bound: Score,
    /// Search nodes of this round.
    pub nodes: u64,
    /// Time since the search started, at the end of the round.
    pub elapsed: Duration,
}

/// Coverage of one example as a function of the hypothesis, tabulated over
/// the hypotheses evaluated so far. Only the rules in `rules` can influence
/// the verdict, so table keys are hypotheses restricted to them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypothesisConstraint {
    /// Identifiers of the identical examples sharing this constraint.
    pub examples: Vec<String>,
    pub penalty: Penalty,
    pub rules: Vec<usize>,
    pub verdicts: BTreeMap<Vec<usize>, bool>,
}

impl HypothesisConstraint {
    /// The recorded verdict for `h`, if its restriction has been evaluated.
    pub fn verdict(&self, h: &Hypothesis) -> Option<bool> {
        let key: Vec<usize> = h
            .ids()
            .iter()
            .copied()
            .filter(|r| self.rules.binary_search(r).is_ok())
            .collect();
        self.verdicts.get(&key).copied()
    }
}

/// State of the refinement loop after it stops.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SearchState {
    /// Representative identifier of each relevant example cluster, in the
    /// order they were added.
    pub relevant: Vec<String>,
    pub constraints: Vec<HypothesisConstraint>,
    pub incumbent: Option<(Hypothesis, Score)>,
    pub lower_bound: Score,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LearnResult {
    pub hypothesis: Hypothesis,
    pub report: CoverageReport,
    /// The score is the minimum over all hypotheses and no smaller id vector
    /// reaches it.
    pub certified: bool,
    pub iterations: usize,
    pub nodes: u64,
    pub progress: Vec<Progress>,
    pub state: SearchState,
}

/// Scores `h` and reports whether it is an inductive solution.
pub fn verify(task: &LearningTask, h: &Hypothesis) -> Result<CoverageReport> {
    if let Some(&bad) = h.ids().iter().find(|&&r| r >= task.space.len()) {
        return Err(Error::Task(format!(
            "rule id {bad} is outside the hypothesis space"
        )));
    }
    score_hypothesis(task, h)
}

fn report_from(engine: &Engine, task: &LearningTask, h: &Hypothesis) -> Result<CoverageReport> {
    let missed: HashSet<&str> = engine
        .uncovered(h.ids())?
        .into_iter()
        .flat_map(|c| engine.clusters[c].ids.iter().map(String::as_str))
        .collect();
    let ids = task
        .positives
        .iter()
        .chain(&task.negatives)
        .map(|e| (&e.id, e.penalty))
        .chain(
            task.brave
                .iter()
                .chain(&task.cautious)
                .map(|o| (&o.id, o.penalty)),
        );
    let mut uncovered = Vec::new();
    let mut penalty = Penalty::ZERO;
    for (id, pen) in ids {
        if missed.contains(id.as_str()) {
            uncovered.push(id.clone());
            penalty = penalty + pen;
        }
    }
    Ok(CoverageReport::new(uncovered, penalty, task.length(h)))
}

fn snapshot(engine: &Engine, relevant: &[usize]) -> Vec<HypothesisConstraint> {
    relevant
        .iter()
        .map(|&c| {
            let cl = &engine.clusters[c];
            HypothesisConstraint {
                examples: cl.ids.clone(),
                penalty: cl.penalty,
                rules: cl.relevant.clone(),
                verdicts: cl
                    .table
                    .borrow()
                    .iter()
                    .map(|(k, v)| (k.clone(), *v))
                    .collect(),
            }
        })
        .collect()
}

/// Finds a hypothesis of minimal score, the lexicographically smallest
/// sorted id vector among those. Returns [`Error::Unsatisfiable`] when every
/// hypothesis has infinite score.
pub fn solve_optimal(task: &LearningTask, options: &LearnOptions) -> Result<LearnResult> {
    let start = Instant::now();
    let deadline = options.time_budget.map(|b| start + b);
    let engine = Engine::new(task)?;
    let layout = Layout::new(&engine);

    let mut relevant: Vec<usize> = Vec::new();
    let mut seed: Option<Vec<usize>> = None;
    let mut floor = Penalty::ZERO;
    let mut incumbent: Option<(Vec<usize>, Penalty)> = None;
    let mut nodes = 0u64;
    let mut progress = Vec::new();
    let mut iteration = 0usize;

    let finish = |h: Vec<usize>,
                  certified: bool,
                  iterations,
                  nodes,
                  progress,
                  relevant: &[usize],
                  floor,
                  inc| {
        let hypothesis = Hypothesis::new(h);
        let report = report_from(&engine, task, &hypothesis)?;
        let state = SearchState {
            relevant: relevant
                .iter()
                .map(|&c| engine.clusters[c].representative().to_string())
                .collect(),
            constraints: snapshot(&engine, relevant),
            incumbent: inc,
            lower_bound: floor,
        };
        Ok(LearnResult {
            hypothesis,
            report,
            certified,
            iterations,
            nodes,
            progress,
            state,
        })
    };

    loop {
        iteration += 1;
        let limits = Limits {
            deadline,
            max_nodes: options.node_budget.map(|b| b.saturating_sub(nodes)),
        };
        let seeded = match &seed {
            Some(h) => {
                let mut pen = Penalty::ZERO;
                for &c in &relevant {
                    if !engine.covers(c, h)? {
                        pen = pen + engine.clusters[c].penalty;
                    }
                }
                Some((h.clone(), pen + engine.length(h)))
            }
            None => None,
        };
        let proposal =
            Proposer::new(&engine, &layout, relevant.clone(), seeded, floor, limits).run()?;
        nodes += proposal.nodes;
        let full = engine.score(&proposal.hypothesis)?;
        let better = match &incumbent {
            None => true,
            Some((h, s)) => full < *s || (full == *s && proposal.hypothesis < *h),
        };
        if better {
            incumbent = Some((proposal.hypothesis.clone(), full));
        }
        if proposal.complete {
            floor = floor.max(proposal.score);
        }
        let (inc_h, inc_s) = incumbent.clone().expect("set above");
        let record = Progress {
            iteration,
            relevant: relevant.len(),
            incumbent: inc_s,
            lower_bound: floor,
            nodes: proposal.nodes,
            elapsed: start.elapsed(),
        };
        log::info!(
            "iteration {} relevant={} incumbent={} bound={} nodes={}",
            record.iteration,
            record.relevant,
            record.incumbent,
            record.lower_bound,
            proposal.nodes
        );
        progress.push(record);
        let inc_state = Some((Hypothesis::new(inc_h.clone()), inc_s));

        if !proposal.complete {
            return finish(
                inc_h, false, iteration, nodes, progress, &relevant, floor, inc_state,
            );
        }
        if proposal.score == Penalty::Infinite {
            return Err(Error::Unsatisfiable);
        }
        if full == proposal.score {
            let inc_state = Some((Hypothesis::new(proposal.hypothesis.clone()), full));
            return finish(
                proposal.hypothesis,
                true,
                iteration,
                nodes,
                progress,
                &relevant,
                floor,
                inc_state,
            );
        }
        let in_relevant: HashSet<usize> = relevant.iter().copied().collect();
        let pick = engine
            .uncovered(&proposal.hypothesis)?
            .into_iter()
            .filter(|c| !in_relevant.contains(c))
            .max_by(|&a, &b| {
                let (ca, cb) = (&engine.clusters[a], &engine.clusters[b]);
                ca.penalty
                    .cmp(&cb.penalty)
                    .then_with(|| cb.representative().cmp(ca.representative()))
            })
            .expect("a score gap implies an uncovered example outside the relevant set");
        relevant.push(pick);
        seed = Some(proposal.hypothesis);
        let out_of_rounds = options.max_iterations.is_some_and(|m| iteration >= m);
        let out_of_time = deadline.is_some_and(|d| Instant::now() >= d);
        if out_of_rounds || out_of_time {
            return finish(
                inc_h, false, iteration, nodes, progress, &relevant, floor, inc_state,
            );
        }
    }
}

/// Tabulates the coverage of every example cluster over the given
/// hypotheses, using the same evaluation as [`solve_optimal`].
pub fn hypothesis_constraints(
    task: &LearningTask,
    hypotheses: &[Hypothesis],
) -> Result<Vec<HypothesisConstraint>> {
    let engine = Engine::new(task)?;
    for h in hypotheses {
        for c in 0..engine.clusters.len() {
            engine.covers(c, h.ids())?;
        }
    }
    let all: Vec<usize> = (0..engine.clusters.len()).collect();
    Ok(snapshot(&engine, &all))
}

/// Wraps every example of a task without penalties in an infinite penalty.
pub fn lift_to_noisy(task: &ContextTask) -> LearningTask {
    let cdpi = |e: &NamedCdpi| WeightedCdpi {
        id: e.id.clone(),
        penalty: Penalty::Infinite,
        cdpi: e.cdpi.clone(),
    };
    let cdoe = |o: &Cdoe| WeightedCdoe {
        id: o.id.clone(),
        penalty: Penalty::Infinite,
        first: o.first.clone(),
        second: o.second.clone(),
        op: o.op,
        first_ref: None,
        second_ref: None,
    };
    LearningTask {
        background: task.background.clone(),
        space: task.space.clone(),
        positives: task.positives.iter().map(cdpi).collect(),
        negatives: task.negatives.iter().map(cdpi).collect(),
        brave: task.brave.iter().map(cdoe).collect(),
        cautious: task.cautious.iter().map(cdoe).collect(),
    }
}

/// Keeps only the examples with infinite penalty, as a task without
/// penalties.
pub fn restrict_to_hard(task: &LearningTask) -> ContextTask {
    let cdpi = |e: &WeightedCdpi| {
        (e.penalty == Penalty::Infinite).then(|| NamedCdpi {
            id: e.id.clone(),
            cdpi: e.cdpi.clone(),
        })
    };
    let cdoe = |o: &WeightedCdoe| {
        (o.penalty == Penalty::Infinite).then(|| Cdoe {
            id: o.id.clone(),
            first: o.first.clone(),
            second: o.second.clone(),
            op: o.op,
        })
    };
    ContextTask {
        background: task.background.clone(),
        space: task.space.clone(),
        positives: task.positives.iter().filter_map(cdpi).collect(),
        negatives: task.negatives.iter().filter_map(cdpi).collect(),
        brave: task.brave.iter().filter_map(cdoe).collect(),
        cautious: task.cautious.iter().filter_map(cdoe).collect(),
    }
}

/// Solutions of a task without penalties: hypotheses covering every example.
pub fn covers_all(task: &ContextTask, h: &Hypothesis) -> Result<bool> {
    Ok(score_hypothesis(&lift_to_noisy(task), h)?.is_solution())
}
