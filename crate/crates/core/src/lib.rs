//! Core engine: syntax, grounding, stable-model solving with weak-constraint
//! optimisation, example coverage, hypothesis spaces and the optimal learner.

pub mod coverage;
pub mod error;
pub mod ground;
pub mod learn;
pub mod solve;
pub mod space;
pub mod syntax;
pub mod task;
pub mod taskfile;

pub use error::{Error, Result};
