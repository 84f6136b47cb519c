//! `las`: solve, ground and learn answer set programs, and run benchmarks.
//!
//! Results go to standard output as one JSON document, logs to standard
//! error. Exit status: 0 success, 1 unsatisfiable, 2 input error, 3 budget
//! exhausted before the result was certified optimal.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};
use las_core::ground::ground;
use las_core::learn::{solve_optimal, LearnOptions};
use las_core::solve::{answer_sets, cost, optimal_answer_sets};
use las_core::syntax::parse_program;
use las_core::taskfile::parse_task;
use las_harness::{evaluate, generate, BenchmarkSpec, Family, TestSet};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "las",
    version,
    about = "Learning answer set programs from noisy examples"
)]
struct Cli {
    /// Log progress to standard error (repeat for more detail).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the answer sets of a program, or its optimal ones when it has
    /// weak constraints.
    Solve {
        program: PathBuf,
        /// Stop after this many answer sets.
        #[arg(long)]
        limit: Option<usize>,
        /// List every answer set even when the program has weak constraints.
        #[arg(long)]
        all: bool,
    },
    /// Print the ground instantiation of a program.
    Ground { program: PathBuf },
    /// Learn an optimal hypothesis for a task file.
    Learn {
        task: PathBuf,
        /// Time budget in seconds.
        #[arg(long)]
        budget: Option<f64>,
        /// Search node budget. Unlike the time budget it gives reproducible
        /// results when it runs out.
        #[arg(long)]
        nodes: Option<u64>,
        /// Recorded in the output. The learner itself is deterministic.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Generate a benchmark task with a held-out test set.
    Gen {
        family: FamilyArg,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        test_size: usize,
        /// Output directory for task.las, test.json and meta.json.
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate a hypothesis on a held-out test set.
    Eval {
        /// Program file holding the hypothesis.
        #[arg(long)]
        hypothesis: PathBuf,
        /// Test set written by `gen`.
        #[arg(long)]
        test: PathBuf,
        #[arg(long)]
        family: FamilyArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Hamilton,
    Journey,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Hamilton => Family::Hamilton,
            FamilyArg::Journey => Family::Journey,
        }
    }
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] las_core::Error),
    #[error(transparent)]
    Harness(#[from] las_harness::Error),
    #[error("{0}")]
    Input(String),
}

/// Outcome of a command that ran to completion.
enum Outcome {
    Done(Value),
    /// The command ran but its subject has no solution.
    Unsatisfiable(Value),
    BudgetExhausted(Value),
}

#[derive(Serialize)]
struct LearnRecord {
    hypothesis: Vec<String>,
    rule_ids: Vec<usize>,
    score: String,
    length: u64,
    penalty: String,
    uncovered: Vec<String>,
    certified: bool,
    iterations: usize,
    nodes: u64,
    runtime_seconds: f64,
    seed: u64,
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn to_json<T: Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("plain data serialises")
}

fn run(command: Command) -> Result<Outcome, CliError> {
    match command {
        Command::Solve {
            program,
            limit,
            all,
        } => {
            let gp = ground(&parse_program(&read(&program)?)?)?;
            let optimise = gp.has_weak_constraints() && !all;
            let mut models = if optimise {
                optimal_answer_sets(&gp)
            } else {
                answer_sets(&gp, limit)
            };
            if let Some(l) = limit {
                models.truncate(l);
            }
            let list: Vec<Value> = models
                .iter()
                .map(|m| {
                    let costs: Vec<Value> = cost(&gp, m)
                        .levels()
                        .map(|(l, w)| json!({"level": l, "weight": w}))
                        .collect();
                    json!({"atoms": m.names(&gp), "cost": costs})
                })
                .collect();
            let value = json!({"optimal": optimise, "answer_sets": list});
            Ok(if models.is_empty() {
                Outcome::Unsatisfiable(value)
            } else {
                Outcome::Done(value)
            })
        }
        Command::Ground { program } => {
            let gp = ground(&parse_program(&read(&program)?)?)?;
            Ok(Outcome::Done(
                json!({"atoms": gp.num_atoms(), "rules": gp.rules.len(), "program": gp.dump()}),
            ))
        }
        Command::Learn {
            task,
            budget,
            nodes,
            seed,
        } => {
            let task = parse_task(&read(&task)?)?;
            if budget.is_some_and(|b| !(b.is_finite() && b > 0.0)) {
                return Err(CliError::Input(
                    "the budget must be a positive number of seconds".into(),
                ));
            }
            let options = LearnOptions {
                time_budget: budget.map(Duration::from_secs_f64),
                node_budget: nodes,
                max_iterations: None,
            };
            log::info!(
                "learning over {} space rules and {} examples",
                task.space.len(),
                task.num_examples()
            );
            let start = Instant::now();
            let result = match solve_optimal(&task, &options) {
                Err(las_core::Error::Unsatisfiable) => {
                    return Ok(Outcome::Unsatisfiable(
                        json!({"unsatisfiable": true, "seed": seed}),
                    ));
                }
                other => other?,
            };
            let record = LearnRecord {
                hypothesis: result
                    .hypothesis
                    .ids()
                    .iter()
                    .map(|&i| task.space[i].rule.to_string())
                    .collect(),
                rule_ids: result.hypothesis.ids().to_vec(),
                score: result.report.score.to_string(),
                length: result.report.length,
                penalty: result.report.penalty.to_string(),
                uncovered: result.report.uncovered.clone(),
                certified: result.certified,
                iterations: result.iterations,
                nodes: result.nodes,
                runtime_seconds: start.elapsed().as_secs_f64(),
                seed,
            };
            let value = to_json(&record);
            Ok(if result.certified {
                Outcome::Done(value)
            } else {
                Outcome::BudgetExhausted(value)
            })
        }
        Command::Gen {
            family,
            n,
            noise,
            seed,
            test_size,
            out,
        } => {
            if noise >= 0.5 {
                log::warn!("noise fraction {noise} mislabels at least half of the examples");
            }
            let spec = BenchmarkSpec {
                family: family.into(),
                n,
                noise,
                seed,
                test_size,
            };
            let bench = generate(&spec)?;
            fs::create_dir_all(&out).map_err(|source| CliError::Io {
                path: out.clone(),
                source,
            })?;
            write(&out.join("task.las"), &bench.file.to_text())?;
            write(
                &out.join("test.json"),
                &serde_json::to_string(&bench.test).expect("serialises"),
            )?;
            let meta = to_json(&bench.metadata);
            write(
                &out.join("meta.json"),
                &serde_json::to_string_pretty(&meta).expect("serialises"),
            )?;
            Ok(Outcome::Done(meta))
        }
        Command::Eval {
            hypothesis,
            test,
            family,
        } => {
            let h = parse_program(&read(&hypothesis)?)?;
            let test: TestSet = serde_json::from_str(&read(&test)?)
                .map_err(|e| CliError::Input(format!("{}: {e}", test.display())))?;
            let family: Family = family.into();
            if test.family() != family {
                return Err(CliError::Input(format!(
                    "the test set belongs to the {} family",
                    test.family()
                )));
            }
            let start = Instant::now();
            let mut report = evaluate(&h, &test)?;
            report.runtime_seconds = Some(start.elapsed().as_secs_f64());
            Ok(Outcome::Done(to_json(&report)))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new()
        .filter_level(level)
        .parse_default_env()
        .init();
    let (value, code) = match run(cli.command) {
        Ok(Outcome::Done(v)) => (v, 0),
        Ok(Outcome::Unsatisfiable(v)) => (v, 1),
        Ok(Outcome::BudgetExhausted(v)) => (v, 3),
        Err(e) => {
            eprintln!("error: {e}");
            let unsat = matches!(e, CliError::Core(las_core::Error::Unsatisfiable));
            return ExitCode::from(if unsat { 1 } else { 2 });
        }
    };
    println!(
        "{}",
        serde_json::to_string_pretty(&value).expect("serialises")
    );
    ExitCode::from(code)
}
