#![allow(dead_code)]

pub mod programs;

use las_core::space::SpaceRule;
use las_core::syntax::{parse_atom, parse_program, parse_rule, CmpOp, Program};
use las_core::task::{
    Cdpi, Hypothesis, LearningTask, PartialInterpretation, Penalty, WeightedCdoe, WeightedCdpi,
};
use rand::seq::SliceRandom;
use rand::Rng;

const POOL: &[&str] = &[
    "a.",
    "b.",
    "a :- b.",
    "b :- a.",
    "a :- not b.",
    "b :- not a.",
    "c :- a, b.",
    "c :- not d.",
    "0 {a} 1.",
    "0 {b} 1 :- d.",
    "0 {c} 1.",
    "d :- c.",
    ":- a, b.",
    ":- not a.",
    ":- c, not b.",
    ":- d.",
    ":~ a.[1@1]",
    ":~ b.[2@1]",
    ":~ c.[1@2]",
    ":~ a, b.[1@1]",
    ":~ d.[-1@1]",
    "p(X) :- q(X).",
    "p(X) :- q(X), not r(X).",
    ":- p(X), r(X).",
    ":~ p(X).[1@1, X]",
    ":~ q(X), not a.[X@2, X]",
];

const ATOMS: &[&str] = &["a", "b", "c", "d", "p(1)", "p(2)"];
const CONTEXTS: &[&str] = &[
    "",
    "",
    "d.",
    "q(1).",
    "q(1). q(2).",
    "q(2). r(2).",
    "b :- d. d.",
];

fn length(rule: &las_core::syntax::Rule) -> u64 {
    las_core::space::rule_length(rule)
}

fn random_cdpi(rng: &mut impl Rng) -> Cdpi {
    let mut inc = Vec::new();
    let mut exc = Vec::new();
    for a in ATOMS {
        match rng.gen_range(0..6) {
            0 => inc.push(parse_atom(a).unwrap()),
            1 => exc.push(parse_atom(a).unwrap()),
            _ => {}
        }
    }
    let ctx = CONTEXTS.choose(rng).unwrap();
    Cdpi::new(
        PartialInterpretation::new(inc, exc).unwrap(),
        parse_program(ctx).unwrap(),
    )
    .unwrap()
}

fn random_penalty(rng: &mut impl Rng) -> Penalty {
    if rng.gen_bool(0.2) {
        Penalty::Infinite
    } else {
        Penalty::Finite(rng.gen_range(1..=4))
    }
}

/// A random task over a small propositional-ish language. Space ids are
/// shuffled so rule kinds interleave.
pub fn random_task(rng: &mut impl Rng, max_rules: usize, max_examples: usize) -> LearningTask {
    let k = rng.gen_range(1..=max_rules);
    let mut texts: Vec<&str> = POOL.choose_multiple(rng, k).copied().collect();
    texts.shuffle(rng);
    let space: Vec<SpaceRule> = texts
        .iter()
        .enumerate()
        .map(|(id, t)| {
            let rule = parse_rule(t).unwrap();
            SpaceRule {
                id,
                length: length(&rule),
                rule,
            }
        })
        .collect();
    let background = if rng.gen_bool(0.3) {
        parse_program("d :- q(2).").unwrap()
    } else {
        Program::default()
    };
    let mut task = LearningTask {
        background,
        space,
        ..Default::default()
    };
    let m = rng.gen_range(1..=max_examples);
    let mut cdpis: Vec<Cdpi> = Vec::new();
    for i in 0..m {
        let kind = rng.gen_range(0..10);
        let id = format!("e{i}");
        let penalty = random_penalty(rng);
        if kind < 4 {
            let cdpi = if !cdpis.is_empty() && rng.gen_bool(0.2) {
                cdpis.choose(rng).unwrap().clone()
            } else {
                random_cdpi(rng)
            };
            cdpis.push(cdpi.clone());
            task.positives.push(WeightedCdpi { id, penalty, cdpi });
        } else if kind < 7 {
            let cdpi = if !cdpis.is_empty() && rng.gen_bool(0.2) {
                cdpis.choose(rng).unwrap().clone()
            } else {
                random_cdpi(rng)
            };
            cdpis.push(cdpi.clone());
            task.negatives.push(WeightedCdpi { id, penalty, cdpi });
        } else {
            let o = WeightedCdoe {
                id,
                penalty,
                first: random_cdpi(rng),
                second: random_cdpi(rng),
                op: *CmpOp::ALL.choose(rng).unwrap(),
                first_ref: None,
                second_ref: None,
            };
            if kind < 9 {
                task.brave.push(o);
            } else {
                task.cautious.push(o);
            }
        }
    }
    task
}

/// Minimal score over all hypotheses and the lexicographically smallest
/// sorted id vector reaching it.
pub fn brute_force(task: &LearningTask) -> (Hypothesis, Penalty) {
    let n = task.space.len();
    let mut best: Option<(Vec<usize>, Penalty)> = None;
    for mask in 0u32..(1 << n) {
        let ids: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let h = Hypothesis::new(ids.clone());
        let s = las_core::coverage::score_hypothesis(task, &h)
            .unwrap()
            .score;
        let better = match &best {
            None => true,
            Some((b, bs)) => s < *bs || (s == *bs && ids < *b),
        };
        if better {
            best = Some((ids, s));
        }
    }
    let (ids, s) = best.unwrap();
    (Hypothesis::new(ids), s)
}
