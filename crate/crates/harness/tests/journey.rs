use las_core::solve::{compare, OrderingVerdict};
use las_core::syntax::{parse_program, CmpOp};
use las_harness::journey::{
    bias_file, check_target, gen_journey, journey_cost, preference, random_journey, w_star,
    Journey, Leg, Mode,
};
use las_harness::{evaluate, generate, BenchmarkSpec, Error, Family, TestSet};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn leg(mode: Mode, distance: u32, crime: u8) -> Leg {
    Leg {
        mode,
        distance,
        crime,
    }
}

#[test]
fn short_walk_beats_driving() {
    let walk = Journey {
        legs: vec![leg(Mode::Walk, 100, 1)],
    };
    let car = Journey {
        legs: vec![leg(Mode::Car, 100, 1)],
    };
    let h = w_star();
    assert_eq!(journey_cost(&h, &walk).unwrap().get(1), 100);
    assert_eq!(journey_cost(&h, &car).unwrap().get(2), 1);
    assert_eq!(preference(&h, &walk, &car).unwrap(), OrderingVerdict::Lt);
}

#[test]
fn dangerous_walk_is_worst() {
    let h = w_star();
    let risky = Journey {
        legs: vec![leg(Mode::Walk, 10, 4)],
    };
    let car = Journey {
        legs: vec![leg(Mode::Car, 5000, 5), leg(Mode::Car, 10, 1)],
    };
    assert_eq!(preference(&h, &car, &risky).unwrap(), OrderingVerdict::Lt);
}

#[test]
fn same_legs_in_another_order_are_equal() {
    let a = Journey {
        legs: vec![leg(Mode::Walk, 300, 2), leg(Mode::Bus, 900, 5)],
    };
    let b = Journey {
        legs: vec![leg(Mode::Bus, 900, 5), leg(Mode::Walk, 300, 2)],
    };
    assert_eq!(preference(&w_star(), &a, &b).unwrap(), OrderingVerdict::Eq);
}

#[test]
fn w_star_lies_in_the_bias() {
    let space = bias_file().into_task().unwrap().space;
    check_target(&w_star(), &space).unwrap();
}

#[test]
fn target_outside_the_bias_is_rejected() {
    let target = parse_program(":~ leg_mode(L,bus).[1@7, L]").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    assert!(matches!(
        gen_journey(&mut rng, &target, 4, 0.0, 2),
        Err(Error::TargetOutsideSpace(_))
    ));
}

#[test]
fn generated_operators_agree_with_cost_comparison() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let h = w_star();
    let b = gen_journey(&mut rng, &h, 30, 0.0, 20).unwrap();
    assert!(b.flipped.is_empty());
    let strict = b.train.iter().filter(|p| p.truth == "<").count();
    assert_eq!(strict, 15);
    for p in b.train.iter().chain(&b.test) {
        let v = compare(
            &journey_cost(&h, &p.first).unwrap(),
            &journey_cost(&h, &p.second).unwrap(),
        );
        let op = match v {
            OrderingVerdict::Lt => "<",
            OrderingVerdict::Eq => "=",
            OrderingVerdict::Gt => ">",
        };
        assert_eq!(p.truth, op);
        assert_eq!(p.label, p.truth);
        assert_ne!(p.truth, ">");
    }
    assert!(b.task.negatives.is_empty() && b.task.cautious.is_empty());
    assert_eq!(b.task.positives.len(), 60);
    assert!(b
        .task
        .positives
        .iter()
        .all(|e| e.penalty == las_core::task::Penalty::Infinite));
    assert!(b
        .task
        .brave
        .iter()
        .all(|o| o.penalty == las_core::task::Penalty::Finite(1)));
}

#[test]
fn noise_flips_strict_and_equal_operators() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let b = gen_journey(&mut rng, &w_star(), 20, 0.2, 0).unwrap();
    assert_eq!(b.flipped.len(), 4);
    for (i, p) in b.train.iter().enumerate() {
        let truth = p.truth_op().unwrap();
        let label = p.label_op().unwrap();
        if b.flipped.contains(&i) {
            let expected = if truth == CmpOp::Lt {
                CmpOp::Gt
            } else {
                CmpOp::Ne
            };
            assert_eq!(label, expected);
        } else {
            assert_eq!(label, truth);
        }
        assert_eq!(b.task.brave[i].op, label);
    }
}

#[test]
fn target_agrees_with_its_own_test_pairs() {
    let mut spec = BenchmarkSpec::new(Family::Journey, 6, 0.0, 5);
    spec.test_size = 40;
    let b = generate(&spec).unwrap();
    assert_eq!(evaluate(&w_star(), &b.test).unwrap().accuracy, 1.0);
    assert!(evaluate(&w_star(), &TestSet::Journey { pairs: vec![] }).is_err());
}

#[test]
fn journeys_have_one_to_four_legs_in_range() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let j = random_journey(&mut rng);
        assert!((1..=4).contains(&j.legs.len()));
        for l in &j.legs {
            assert!((1..=20_000).contains(&l.distance));
            assert!((1..=5).contains(&l.crime));
        }
    }
}

#[test]
fn equal_specs_give_identical_journey_files() {
    let mut spec = BenchmarkSpec::new(Family::Journey, 10, 0.2, 99);
    spec.test_size = 10;
    let a = generate(&spec).unwrap();
    let b = generate(&spec).unwrap();
    assert_eq!(a.file.to_text(), b.file.to_text());
    assert_eq!(
        serde_json::to_string(&a.test).unwrap(),
        serde_json::to_string(&b.test).unwrap()
    );
}
