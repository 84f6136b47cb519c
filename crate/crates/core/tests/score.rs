use las_core::learn::{solve_optimal, verify, LearnOptions};
use las_core::task::{Hypothesis, Penalty};
use las_core::taskfile::parse_task;

#[test]
fn conflicting_examples_cost_one_with_the_empty_hypothesis() {
    let task = parse_task(
        "1 ~ p.
         #pos(e1@1, {p}, {}).
         #pos(e2@1, {}, {p}).",
    )
    .unwrap();
    let r = solve_optimal(&task, &LearnOptions::default()).unwrap();
    assert!(r.certified);
    assert_eq!(r.hypothesis, Hypothesis::empty());
    assert_eq!(r.report.score, Penalty::Finite(1));
    assert_eq!(r.report.uncovered, vec!["e1".to_string()]);
    // Taking p instead swaps which example is missed and adds its length.
    assert_eq!(
        verify(&task, &Hypothesis::new(vec![0])).unwrap().score,
        Penalty::Finite(2)
    );
}

#[test]
fn missing_an_infinite_penalty_example_is_not_a_solution() {
    let task = parse_task(
        "1 ~ p.
         #pos(must@inf, {p}, {}).
         #neg(soft@1, {p}, {}).",
    )
    .unwrap();
    let empty = verify(&task, &Hypothesis::empty()).unwrap();
    assert!(!empty.is_solution());
    assert_eq!(empty.score, Penalty::Infinite);
    let with_p = verify(&task, &Hypothesis::new(vec![0])).unwrap();
    assert!(with_p.is_solution());
    assert_eq!(with_p.score, Penalty::Finite(2));
}

#[test]
fn repeated_examples_each_charge_their_penalty() {
    let task = parse_task(
        "1 ~ p.
         #pos(a@1, {p}, {}, {q.}).
         #pos(b@1, {p}, {}, {q.}).",
    )
    .unwrap();
    let empty = verify(&task, &Hypothesis::empty()).unwrap();
    assert_eq!(empty.penalty, Penalty::Finite(2));
    assert_eq!(empty.uncovered, vec!["a".to_string(), "b".to_string()]);
    let r = solve_optimal(&task, &LearnOptions::default()).unwrap();
    assert_eq!(r.hypothesis, Hypothesis::new(vec![0]));
    assert_eq!(r.report.score, Penalty::Finite(1));
}

#[test]
fn hypotheses_outside_the_space_are_rejected() {
    let task = parse_task("1 ~ p. #pos(e@1, {p}, {}).").unwrap();
    assert!(verify(&task, &Hypothesis::new(vec![3])).is_err());
}

#[test]
fn unsatisfiable_tasks_are_reported() {
    let task = parse_task("1 ~ p. #pos(e1, {p}, {}). #neg(e2, {p}, {}).").unwrap();
    assert!(matches!(
        solve_optimal(&task, &LearnOptions::default()),
        Err(las_core::Error::Unsatisfiable)
    ));
}

#[test]
fn orderings_are_scored_by_quantifier() {
    // c1 has two accepting answer sets and only the one with x pays the weak
    // constraint. c2 has just the one with x.
    let task = parse_task(
        "0 {x} 1.
         1 ~ :~ x.[1@1]
         #pos(c1, {}, {}).
         #pos(c2, {x}, {}).
         #brave_ordering(b@1, c1, c2, <).
         #cautious_ordering(c@1, c1, c2, <).",
    )
    .unwrap();
    let r = verify(&task, &Hypothesis::new(vec![0])).unwrap();
    // Some accepting pair is strictly ordered, not every pair.
    assert_eq!(r.uncovered, vec!["c".to_string()]);
    let r = verify(&task, &Hypothesis::empty()).unwrap();
    assert_eq!(r.uncovered, vec!["b".to_string(), "c".to_string()]);
}
