use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unsafe rule at {line}:{column}: variable(s) {} not bound by a positive body literal", .variables.join(", "))]
    Unsafe {
        line: usize,
        column: usize,
        variables: Vec<String>,
    },

    #[error("empty range {lo}..{hi} at {line}:{column}")]
    EmptyRange {
        line: usize,
        column: usize,
        lo: i64,
        hi: i64,
    },

    #[error("weak constraint {what} `{term}` is not an integer after grounding")]
    NonIntegerWeak { what: &'static str, term: String },

    #[error("{what} limit of {limit} exceeded")]
    LimitExceeded { what: &'static str, limit: usize },

    #[error("invalid task: {0}")]
    Task(String),

    #[error("invalid mode bias: {0}")]
    Bias(String),

    #[error(
        "the task is unsatisfiable: every hypothesis leaves an infinite-penalty example uncovered"
    )]
    Unsatisfiable,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
