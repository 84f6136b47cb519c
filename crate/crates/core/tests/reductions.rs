mod common;

use std::collections::BTreeSet;

use las_core::coverage::{accepts, respects_brave, respects_cautious, score_hypothesis};
use las_core::learn::{covers_all, lift_to_noisy, restrict_to_hard};
use las_core::task::{ContextTask, Hypothesis, LearningTask, Penalty, WeightedCdoe};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn hypotheses(n: usize) -> impl Iterator<Item = Hypothesis> {
    (0u32..1 << n).map(move |mask| Hypothesis::new((0..n).filter(|i| mask >> i & 1 == 1).collect()))
}

fn as_weighted(o: &las_core::task::Cdoe) -> WeightedCdoe {
    WeightedCdoe {
        id: o.id.clone(),
        penalty: Penalty::Infinite,
        first: o.first.clone(),
        second: o.second.clone(),
        op: o.op,
        first_ref: None,
        second_ref: None,
    }
}

/// Every example covered, checked one example at a time.
fn covers_every_example(task: &ContextTask, h: &Hypothesis) -> bool {
    let program = las_core::syntax::Program::new(
        h.ids()
            .iter()
            .map(|&i| task.space[i].rule.clone())
            .collect(),
    );
    let b = &task.background;
    task.positives
        .iter()
        .all(|e| accepts(b, &program, &e.cdpi).unwrap())
        && task
            .negatives
            .iter()
            .all(|e| !accepts(b, &program, &e.cdpi).unwrap())
        && task
            .brave
            .iter()
            .all(|o| respects_brave(b, &program, &as_weighted(o)).unwrap())
        && task
            .cautious
            .iter()
            .all(|o| respects_cautious(b, &program, &as_weighted(o)).unwrap())
}

fn solutions_hard(task: &ContextTask) -> BTreeSet<Hypothesis> {
    hypotheses(task.space.len())
        .filter(|h| covers_every_example(task, h))
        .collect()
}

fn solutions_weighted(task: &LearningTask) -> BTreeSet<Hypothesis> {
    hypotheses(task.space.len())
        .filter(|h| score_hypothesis(task, h).unwrap().is_solution())
        .collect()
}

fn harden(task: &mut LearningTask, rng: &mut impl Rng, p: f64) {
    for e in task.positives.iter_mut().chain(task.negatives.iter_mut()) {
        if rng.gen_bool(p) {
            e.penalty = Penalty::Infinite;
        }
    }
    for o in task.brave.iter_mut().chain(task.cautious.iter_mut()) {
        if rng.gen_bool(p) {
            o.penalty = Penalty::Infinite;
        }
    }
}

#[test]
fn lifting_to_infinite_penalties_preserves_solutions() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let (mut some, mut partial) = (0, 0);
    for round in 0..100 {
        let mut task = common::random_task(&mut rng, 6, 4);
        harden(&mut task, &mut rng, 1.0);
        let hard = restrict_to_hard(&task);
        let expected = solutions_hard(&hard);
        let lifted = lift_to_noisy(&hard);
        assert_eq!(solutions_weighted(&lifted), expected, "round {round}");
        for h in hypotheses(hard.space.len()) {
            assert_eq!(
                covers_all(&hard, &h).unwrap(),
                expected.contains(&h),
                "round {round}"
            );
        }
        assert_eq!(restrict_to_hard(&lifted), hard);
        some += usize::from(!expected.is_empty());
        partial += usize::from(!expected.is_empty() && expected.len() < 1 << hard.space.len());
    }
    assert!(
        some > 20 && partial > 10,
        "weak sample: {some} solvable, {partial} partially solvable"
    );
}

#[test]
fn restricting_to_hard_examples_preserves_solutions() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    let mut partial = 0;
    for round in 0..100 {
        let mut task = common::random_task(&mut rng, 6, 6);
        harden(&mut task, &mut rng, 0.4);
        let hard = restrict_to_hard(&task);
        let expected = solutions_hard(&hard);
        assert_eq!(solutions_weighted(&task), expected, "round {round}");
        partial += usize::from(!expected.is_empty() && expected.len() < 1 << hard.space.len());
    }
    assert!(
        partial >= 5,
        "only {partial} tasks with a proper non-empty solution set"
    );
}
