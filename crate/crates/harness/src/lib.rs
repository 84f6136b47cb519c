//! Benchmark generation and evaluation: Hamiltonian graph recognition and
//! journey preference learning, both with controlled label noise.

pub mod benchmark;
pub mod graph;
pub mod hamilton;
pub mod journey;
pub mod metrics;

pub use benchmark::{evaluate, generate, Benchmark, BenchmarkSpec, EvalReport, Family, TestSet};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] las_core::Error),
    #[error("target rule `{0}` is not in the hypothesis space")]
    TargetOutsideSpace(String),
    #[error("the test set is empty")]
    EmptyTestSet,
    #[error("the hypothesis has no answer set for a journey")]
    NoAnswerSet,
    #[error("{0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Number of examples to mislabel: `floor(noise * n)`.
pub fn noisy_count(n: usize, noise: f64) -> usize {
    ((noise * n as f64) + 1e-9).floor() as usize
}
