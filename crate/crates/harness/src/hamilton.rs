//! Learning to recognise Hamiltonian graphs.
//!
//! Each example is a graph placed in the context of a CDPI with an empty
//! partial interpretation. A graph labelled Hamiltonian is a positive
//! example, so the learned program must be satisfiable with it. The others
//! are negative examples and must make the program unsatisfiable.

use las_core::ground::ground;
use las_core::solve::Solver;
use las_core::space::{enumerate_space, number_rules, LengthMeasure, SpaceRule};
use las_core::syntax::{parse_program, Program};
use las_core::task::{Cdpi, LearningTask, PartialInterpretation, Penalty, WeightedCdpi};
use las_core::taskfile::TaskFile;
use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::graph::{is_hamiltonian, random_hamiltonian, random_non_hamiltonian, Graph};
use crate::Result;

pub const TARGET: &str = "\
reach(V0) :- in(1,V0).
reach(V1) :- in(V0,V1), reach(V0).
0 { in(V0,V1) } 1 :- edge(V0,V1).
:- node(V0), not reach(V0).
:- in(V0,V1), in(V0,V2), V1 != V2.
";

/// The bias is split by rule kind so that each kind gets its own body and
/// variable limits. The space is the union of the three.
const NORMAL_BIAS: &str = "\
#constant(node, 1).
#modeh(reach(var(node))).
#modeb(1, in(const(node), var(node))).
#modeb(1, in(var(node), var(node))).
#modeb(1, reach(var(node))).
#maxv(2). #maxb(2).
#connected.
";

const CHOICE_BIAS: &str = "\
#modeh(in(var(node), var(node)), choice).
#modeb(1, edge(var(node), var(node))).
#maxv(2). #maxb(1).
#choice(bounds=0..1).
";

const CONSTRAINT_BIAS: &str = "\
#modeb(1, node(var(node))).
#modeb(2, in(var(node), var(node))).
#modeb(1, reach(var(node)), any).
#modeb(1, var(node) != var(node)).
#maxv(3). #maxb(3).
#constraint.
#connected.
";

/// Probability of each optional edge in generated graphs.
pub const EDGE_PROBABILITY: f64 = 0.7;

pub fn target() -> Program {
    parse_program(TARGET).expect("the target program parses")
}

/// The hypothesis space, numbered by kind, then length, then text.
pub fn space() -> Vec<SpaceRule> {
    let mut rules = Vec::new();
    for text in [NORMAL_BIAS, CHOICE_BIAS, CONSTRAINT_BIAS] {
        let bias = TaskFile::parse(text).expect("built-in bias parses").bias;
        rules.extend(
            enumerate_space(&bias)
                .expect("built-in bias enumerates")
                .into_iter()
                .map(|r| r.rule),
        );
    }
    number_rules(rules, LengthMeasure::Literals)
}

/// True when `h` together with the graph's facts has an answer set.
pub fn classify_graph(h: &Program, g: &Graph) -> Result<bool> {
    let program = Program::union([h, &g.facts()]);
    let gp = ground(&program)?;
    Ok(Solver::new(&gp).is_satisfiable(&[]))
}

/// A graph with its true class and the label given to the learner.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelledGraph {
    pub graph: Graph,
    pub hamiltonian: bool,
    pub label: bool,
}

impl LabelledGraph {
    pub fn correct(graph: Graph) -> Self {
        let hamiltonian = is_hamiltonian(&graph);
        LabelledGraph {
            graph,
            hamiltonian,
            label: hamiltonian,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HamiltonBenchmark {
    pub task: LearningTask,
    pub train: Vec<LabelledGraph>,
    /// Indices into `train` whose labels were flipped.
    pub flipped: Vec<usize>,
    pub test: Vec<LabelledGraph>,
}

/// Builds the learning task over the given labelled graphs, every example
/// with penalty 1.
pub fn hamilton_task(examples: &[LabelledGraph]) -> LearningTask {
    let mut task = LearningTask {
        space: space(),
        ..LearningTask::default()
    };
    for (i, e) in examples.iter().enumerate() {
        let cdpi = Cdpi {
            pi: PartialInterpretation::empty(),
            context: e.graph.facts(),
        };
        let example = WeightedCdpi {
            id: format!("g{}", i + 1),
            penalty: Penalty::Finite(1),
            cdpi,
        };
        if e.label {
            task.positives.push(example);
        } else {
            task.negatives.push(example);
        }
    }
    task
}

/// `n` graphs on one to four nodes, half of them Hamiltonian (the extra one
/// for odd `n` is Hamiltonian), in random order.
pub fn random_graphs(rng: &mut impl Rng, n: usize) -> Vec<Graph> {
    let mut classes: Vec<bool> = (0..n).map(|i| i < n.div_ceil(2)).collect();
    rand::seq::SliceRandom::shuffle(classes.as_mut_slice(), rng);
    classes
        .into_iter()
        .map(|ham| {
            let nodes = rng.gen_range(1..=4);
            if ham {
                random_hamiltonian(rng, nodes, EDGE_PROBABILITY)
            } else {
                random_non_hamiltonian(rng, nodes, EDGE_PROBABILITY)
            }
        })
        .collect()
}

/// Flips the labels of exactly `floor(noise * n)` uniformly chosen examples
/// and returns their indices in increasing order.
pub fn flip_labels(rng: &mut impl Rng, examples: &mut [LabelledGraph], noise: f64) -> Vec<usize> {
    let k = crate::noisy_count(examples.len(), noise);
    let mut picked = sample(rng, examples.len(), k).into_vec();
    picked.sort_unstable();
    for &i in &picked {
        examples[i].label = !examples[i].label;
    }
    picked
}

pub fn gen_hamilton(
    rng: &mut impl Rng,
    n: usize,
    noise: f64,
    test_size: usize,
) -> HamiltonBenchmark {
    let mut train: Vec<LabelledGraph> = random_graphs(rng, n)
        .into_iter()
        .map(LabelledGraph::correct)
        .collect();
    let flipped = flip_labels(rng, &mut train, noise);
    let test = random_graphs(rng, test_size)
        .into_iter()
        .map(LabelledGraph::correct)
        .collect();
    HamiltonBenchmark {
        task: hamilton_task(&train),
        train,
        flipped,
        test,
    }
}
