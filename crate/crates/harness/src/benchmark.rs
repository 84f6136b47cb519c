//! Benchmark specifications, generation and evaluation of learned programs.

use std::fmt;
use std::str::FromStr;

use las_core::syntax::Program;
use las_core::task::LearningTask;
use las_core::taskfile::{task_to_file, TaskFile};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::hamilton::{self, classify_graph, LabelledGraph};
use crate::journey::{self, preference, JourneyPair};
use crate::metrics::Confusion;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Hamilton,
    Journey,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Hamilton => "hamilton",
            Family::Journey => "journey",
        })
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hamilton" => Ok(Family::Hamilton),
            "journey" => Ok(Family::Journey),
            other => Err(Error::Input(format!("unknown benchmark family `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkSpec {
    pub family: Family,
    /// Training examples for Hamilton, ordering examples for journeys.
    pub n: usize,
    pub noise: f64,
    pub seed: u64,
    pub test_size: usize,
}

impl BenchmarkSpec {
    pub fn new(family: Family, n: usize, noise: f64, seed: u64) -> Self {
        BenchmarkSpec {
            family,
            n,
            noise,
            seed,
            test_size: 1000,
        }
    }
}

/// Held-out data for evaluation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum TestSet {
    Hamilton { graphs: Vec<LabelledGraph> },
    Journey { pairs: Vec<JourneyPair> },
}

impl TestSet {
    pub fn family(&self) -> Family {
        match self {
            TestSet::Hamilton { .. } => Family::Hamilton,
            TestSet::Journey { .. } => Family::Journey,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            TestSet::Hamilton { graphs } => graphs.len(),
            TestSet::Journey { pairs } => pairs.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Generation parameters and the noisy examples, for auditing a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub spec: BenchmarkSpec,
    /// Identifiers of the examples whose labels were flipped.
    pub flipped: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edge_probability: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Benchmark {
    pub file: TaskFile,
    pub task: LearningTask,
    pub test: TestSet,
    pub metadata: Metadata,
}

/// Generates a benchmark. Equal specifications give identical output. The
/// journey family uses W* as the target.
pub fn generate(spec: &BenchmarkSpec) -> Result<Benchmark> {
    if !(0.0..1.0).contains(&spec.noise) {
        return Err(Error::Input(format!(
            "noise fraction {} is outside [0, 1)",
            spec.noise
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    match spec.family {
        Family::Hamilton => {
            let b = hamilton::gen_hamilton(&mut rng, spec.n, spec.noise, spec.test_size);
            Ok(Benchmark {
                file: task_to_file(&b.task),
                task: b.task,
                test: TestSet::Hamilton { graphs: b.test },
                metadata: Metadata {
                    spec: spec.clone(),
                    flipped: b.flipped.iter().map(|i| format!("g{}", i + 1)).collect(),
                    edge_probability: Some(hamilton::EDGE_PROBABILITY),
                    target: None,
                },
            })
        }
        Family::Journey => {
            let target = journey::w_star();
            let b = journey::gen_journey(&mut rng, &target, spec.n, spec.noise, spec.test_size)?;
            Ok(Benchmark {
                file: b.file,
                task: b.task,
                test: TestSet::Journey { pairs: b.test },
                metadata: Metadata {
                    spec: spec.clone(),
                    flipped: b.flipped.iter().map(|i| format!("o{}", i + 1)).collect(),
                    edge_probability: None,
                    target: Some(target.to_string()),
                },
            })
        }
    }
}

/// Quality of a learned program on a test set. Precision, recall and F1
/// are given for the Hamilton family only, with Hamiltonian as the positive
/// class.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub family: Family,
    pub accuracy: f64,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub f1: Option<f64>,
    pub runtime_seconds: Option<f64>,
    pub hypothesis: String,
    pub certified: Option<bool>,
}

pub fn evaluate(h: &Program, test: &TestSet) -> Result<EvalReport> {
    if test.is_empty() {
        return Err(Error::EmptyTestSet);
    }
    let mut report = EvalReport {
        family: test.family(),
        accuracy: 0.0,
        precision: None,
        recall: None,
        f1: None,
        runtime_seconds: None,
        hypothesis: h.to_string(),
        certified: None,
    };
    match test {
        TestSet::Hamilton { graphs } => {
            let mut c = Confusion::default();
            for g in graphs {
                c.record(classify_graph(h, &g.graph)?, g.hamiltonian);
            }
            report.accuracy = c.accuracy();
            report.precision = Some(c.precision());
            report.recall = Some(c.recall());
            report.f1 = Some(c.f1());
        }
        TestSet::Journey { pairs } => {
            let mut agree = 0usize;
            for p in pairs {
                let verdict = preference(h, &p.first, &p.second)?;
                if p.truth_op()? == journey::op_of(verdict) {
                    agree += 1;
                }
            }
            report.accuracy = agree as f64 / pairs.len() as f64;
        }
    }
    Ok(report)
}
