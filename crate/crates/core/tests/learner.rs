mod common;

use las_core::learn::{solve_optimal, LearnOptions};
use las_core::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn certified_result_matches_exhaustive_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for round in 0..150 {
        let task = common::random_task(&mut rng, 8, 8);
        let (best, score) = common::brute_force(&task);
        match solve_optimal(&task, &LearnOptions::default()) {
            Ok(r) => {
                assert!(r.certified, "round {round}");
                assert_eq!(r.report.score, score, "round {round}: {:?}", r.hypothesis);
                assert_eq!(r.hypothesis, best, "round {round}");
            }
            Err(Error::Unsatisfiable) => assert!(!score.is_finite(), "round {round}"),
            Err(e) => panic!("round {round}: {e}"),
        }
    }
}

#[test]
fn hypothesis_constraints_agree_with_direct_scoring() {
    use las_core::coverage::score_hypothesis;
    use las_core::learn::hypothesis_constraints;
    use las_core::task::Hypothesis;
    use rand::Rng;

    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for round in 0..60 {
        let task = common::random_task(&mut rng, 8, 8);
        let n = task.space.len();
        let hs: Vec<Hypothesis> = (0..6)
            .map(|_| Hypothesis::new((0..n).filter(|_| rng.gen_bool(0.4)).collect()))
            .collect();
        let constraints = hypothesis_constraints(&task, &hs).unwrap();
        let listed: usize = constraints.iter().map(|c| c.examples.len()).sum();
        assert_eq!(listed, task.num_examples(), "round {round}");
        for h in &hs {
            let report = score_hypothesis(&task, h).unwrap();
            for c in &constraints {
                let covered = c.verdict(h).expect("every queried hypothesis is tabulated");
                for id in &c.examples {
                    assert_eq!(
                        covered,
                        !report.uncovered.contains(id),
                        "round {round}, example {id}, {h:?}"
                    );
                }
            }
        }
    }
}

#[test]
fn node_budget_runs_are_reproducible() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let options = LearnOptions {
        node_budget: Some(40),
        ..LearnOptions::default()
    };
    for _ in 0..20 {
        let task = common::random_task(&mut rng, 10, 8);
        let runs: Vec<_> = (0..3)
            .map(|_| {
                solve_optimal(&task, &options)
                    .map(|r| (r.hypothesis, r.report.score, r.certified, r.nodes))
            })
            .collect();
        for r in &runs[1..] {
            match (r, &runs[0]) {
                (Ok(a), Ok(b)) => assert_eq!(a, b),
                (Err(_), Err(_)) => {}
                _ => panic!("runs disagree"),
            }
        }
    }
}
