//! Learning journey preferences as weak constraints.
//!
//! A journey is a set of legs, each with a mode of transport, a distance and
//! a crime rating, written as facts over `leg(i)` terms. Every journey is a
//! positive example with infinite penalty and ordering examples compare
//! pairs of them.

use std::collections::HashSet;
use std::fmt;

use las_core::ground::ground;
use las_core::solve::{compare, cost, optimal_answer_sets, CostVector, OrderingVerdict};
use las_core::space::canonical_rule;
use las_core::syntax::{parse_program, Atom, CmpOp, Program, Rule, Term};
use las_core::task::{Cdpi, LearningTask, PartialInterpretation, Penalty};
use las_core::taskfile::{CdpiDecl, ExampleKind, OrderingDecl, TaskFile};
use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub const W_STAR: &str = "\
:~ leg_mode(L,walk), leg_crime_rating(L,C), C > 3.[1@3, L, C]
:~ leg_mode(L,car).[1@2, L]
:~ leg_mode(L,walk), leg_distance(L,D).[D@1, L, D]
";

/// Weak constraints of up to three body literals over the leg attributes,
/// with weight 1 or the leg distance, at priority 1, 2 or 3.
pub const BIAS: &str = "\
#constant(mode, bus). #constant(mode, car). #constant(mode, walk). #constant(mode, bicycle).
#constant(threshold, 1..4).
#modeb(1, leg_mode(var(leg), const(mode))).
#modeb(1, leg_distance(var(leg), var(dist))).
#modeb(1, leg_crime_rating(var(leg), var(crime))).
#modeb(1, var(crime) > const(threshold)).
#maxv(3). #maxb(3).
#weak(levels=1..3, weights=1;var(dist)).
";

pub fn w_star() -> Program {
    parse_program(W_STAR).expect("W* parses")
}

pub fn bias_file() -> TaskFile {
    TaskFile::parse(BIAS).expect("built-in bias parses")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Bus,
    Car,
    Walk,
    Bicycle,
}

impl Mode {
    pub const ALL: [Mode; 4] = [Mode::Bus, Mode::Car, Mode::Walk, Mode::Bicycle];

    pub fn name(self) -> &'static str {
        match self {
            Mode::Bus => "bus",
            Mode::Car => "car",
            Mode::Walk => "walk",
            Mode::Bicycle => "bicycle",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Leg {
    pub mode: Mode,
    pub distance: u32,
    pub crime: u8,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Journey {
    pub legs: Vec<Leg>,
}

impl Journey {
    pub fn facts(&self) -> Program {
        let mut rules = Vec::new();
        for (i, leg) in self.legs.iter().enumerate() {
            let id = Term::func("leg", vec![Term::int(i as i64 + 1)]);
            rules.push(Rule::fact(Atom::new(
                "leg_mode",
                vec![id.clone(), Term::sym(leg.mode.name())],
            )));
            rules.push(Rule::fact(Atom::new(
                "leg_distance",
                vec![id.clone(), Term::int(i64::from(leg.distance))],
            )));
            rules.push(Rule::fact(Atom::new(
                "leg_crime_rating",
                vec![id, Term::int(i64::from(leg.crime))],
            )));
        }
        Program::new(rules)
    }

    /// Legs sorted, so journeys differing only in leg numbering compare equal.
    pub fn normalised(&self) -> Vec<Leg> {
        let mut legs = self.legs.clone();
        legs.sort();
        legs
    }
}

pub fn random_leg(rng: &mut impl Rng) -> Leg {
    Leg {
        mode: *Mode::ALL.choose(rng).expect("non-empty"),
        distance: rng.gen_range(1..=20_000),
        crime: rng.gen_range(1..=5),
    }
}

/// One to four random legs.
pub fn random_journey(rng: &mut impl Rng) -> Journey {
    let n = rng.gen_range(1..=4);
    Journey {
        legs: (0..n).map(|_| random_leg(rng)).collect(),
    }
}

/// Cost of the journey's optimal answer set under the weak constraints of `h`.
pub fn journey_cost(h: &Program, j: &Journey) -> Result<CostVector> {
    let gp = ground(&Program::union([h, &j.facts()]))?;
    let best = optimal_answer_sets(&gp);
    let first = best.first().ok_or(Error::NoAnswerSet)?;
    Ok(cost(&gp, first))
}

pub fn preference(h: &Program, a: &Journey, b: &Journey) -> Result<OrderingVerdict> {
    Ok(compare(&journey_cost(h, a)?, &journey_cost(h, b)?))
}

/// A pair of journeys with the operator relating them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JourneyPair {
    pub first: Journey,
    pub second: Journey,
    /// The operator under the target preferences.
    pub truth: String,
    /// The operator given to the learner.
    pub label: String,
}

pub fn op_of(v: OrderingVerdict) -> CmpOp {
    match v {
        OrderingVerdict::Lt => CmpOp::Lt,
        OrderingVerdict::Eq => CmpOp::Eq,
        OrderingVerdict::Gt => CmpOp::Gt,
    }
}

/// Operator given for a flipped label.
pub fn noisy_op(op: CmpOp) -> CmpOp {
    match op {
        CmpOp::Lt => CmpOp::Gt,
        CmpOp::Gt => CmpOp::Lt,
        CmpOp::Eq => CmpOp::Ne,
        CmpOp::Ne => CmpOp::Eq,
        CmpOp::Le => CmpOp::Ge,
        CmpOp::Ge => CmpOp::Le,
    }
}

fn parse_op(s: &str) -> Result<CmpOp> {
    CmpOp::from_symbol(s).ok_or_else(|| Error::Input(format!("unknown ordering operator `{s}`")))
}

impl JourneyPair {
    pub fn truth_op(&self) -> Result<CmpOp> {
        parse_op(&self.truth)
    }

    pub fn label_op(&self) -> Result<CmpOp> {
        parse_op(&self.label)
    }
}

/// A pair whose first journey is strictly preferred under `target`.
pub fn strict_pair(rng: &mut impl Rng, target: &Program) -> Result<(Journey, Journey)> {
    loop {
        let (a, b) = (random_journey(rng), random_journey(rng));
        match preference(target, &a, &b)? {
            OrderingVerdict::Lt => return Ok((a, b)),
            OrderingVerdict::Gt => return Ok((b, a)),
            OrderingVerdict::Eq => {}
        }
    }
}

const MUTATION_TRIES: usize = 200;

/// A pair of equally preferred journeys under `target`. The second journey
/// comes from random edits of the first that keep its cost. When no edit
/// succeeds it is the first journey with its legs renumbered.
pub fn equal_pair(rng: &mut impl Rng, target: &Program) -> Result<(Journey, Journey)> {
    let a = random_journey(rng);
    let base = journey_cost(target, &a)?;
    for _ in 0..MUTATION_TRIES {
        let mut b = a.clone();
        for _ in 0..rng.gen_range(1..=3) {
            let i = rng.gen_range(0..b.legs.len());
            let fresh = random_leg(rng);
            match rng.gen_range(0..3) {
                0 => b.legs[i].mode = fresh.mode,
                1 => b.legs[i].distance = fresh.distance,
                _ => b.legs[i].crime = fresh.crime,
            }
        }
        b.legs.shuffle(rng);
        if b.normalised() != a.normalised()
            && compare(&journey_cost(target, &b)?, &base) == OrderingVerdict::Eq
        {
            return Ok((a, b));
        }
    }
    let mut b = a.clone();
    b.legs.shuffle(rng);
    Ok((a, b))
}

/// `n` pairs, the first half strict and the second half equal, shuffled.
pub fn random_pairs(rng: &mut impl Rng, target: &Program, n: usize) -> Result<Vec<JourneyPair>> {
    let mut strict: Vec<bool> = (0..n).map(|i| i < n.div_ceil(2)).collect();
    strict.shuffle(rng);
    strict
        .into_iter()
        .map(|s| {
            let (first, second) = if s {
                strict_pair(rng, target)?
            } else {
                equal_pair(rng, target)?
            };
            let op = op_of(preference(target, &first, &second)?)
                .symbol()
                .to_string();
            Ok(JourneyPair {
                first,
                second,
                truth: op.clone(),
                label: op,
            })
        })
        .collect()
}

/// Checks that every target rule belongs to the journey hypothesis space.
pub fn check_target(target: &Program, space: &[las_core::space::SpaceRule]) -> Result<()> {
    let known: HashSet<String> = space
        .iter()
        .map(|r| canonical_rule(&r.rule).to_string())
        .collect();
    for r in &target.rules {
        if !known.contains(&canonical_rule(r).to_string()) {
            return Err(Error::TargetOutsideSpace(r.to_string()));
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct JourneyBenchmark {
    pub file: TaskFile,
    pub task: LearningTask,
    pub train: Vec<JourneyPair>,
    /// Indices into `train` whose operators were flipped.
    pub flipped: Vec<usize>,
    pub test: Vec<JourneyPair>,
}

/// Task file over the labelled pairs: journeys `j1, j2, …` as positive
/// examples with infinite penalty and one brave ordering of penalty 1 per
/// pair.
pub fn journey_file(pairs: &[JourneyPair]) -> Result<TaskFile> {
    let mut tf = bias_file();
    for (i, p) in pairs.iter().enumerate() {
        let ids = [format!("j{}", 2 * i + 1), format!("j{}", 2 * i + 2)];
        for (id, j) in ids.iter().zip([&p.first, &p.second]) {
            let cdpi = Cdpi::new(PartialInterpretation::empty(), j.facts())?;
            tf.examples.push(CdpiDecl {
                kind: ExampleKind::Pos,
                id: id.clone(),
                penalty: Penalty::Infinite,
                cdpi,
            });
        }
        tf.orderings.push(OrderingDecl {
            brave: true,
            id: format!("o{}", i + 1),
            penalty: Penalty::Finite(1),
            first: ids[0].clone(),
            second: ids[1].clone(),
            op: p.label_op()?,
        });
    }
    Ok(tf)
}

pub fn gen_journey(
    rng: &mut impl Rng,
    target: &Program,
    n: usize,
    noise: f64,
    test_size: usize,
) -> Result<JourneyBenchmark> {
    let space = bias_file().into_task()?.space;
    check_target(target, &space)?;
    let mut train = random_pairs(rng, target, n)?;
    let mut flipped = sample(rng, n, crate::noisy_count(n, noise)).into_vec();
    flipped.sort_unstable();
    for &i in &flipped {
        train[i].label = noisy_op(train[i].label_op()?).symbol().to_string();
    }
    let test = random_pairs(rng, target, test_size)?;
    let file = journey_file(&train)?;
    let task = file.clone().into_task()?;
    Ok(JourneyBenchmark {
        file,
        task,
        train,
        flipped,
        test,
    })
}
