mod common;

use las_core::syntax::{parse_program, pretty_print, Program};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const NON_GROUND: &[&str] = &[
    "p(X) :- q(X), not r(X).",
    "reach(V1) :- in(V0,V1), reach(V0).",
    "0 { in(V0,V1) } 1 :- edge(V0,V1).",
    ":- in(V0,V1), in(V0,V2), V1 != V2.",
    ":~ leg_mode(L,walk), leg_distance(L,D).[D@1, L, D]",
    ":~ leg_crime_rating(L,C), C > 3.[1@3, L, C]",
    "t(f(X),g(Y,1)) :- s(X,Y), X < Y.",
    "1 { a; b; c } 2 :- d, not e.",
    ":~ x.[-2@-1]",
    "leg_mode(leg(1),walk).",
];

fn round_trips(p: &Program) -> Result<(), TestCaseError> {
    let text = pretty_print(p);
    let again = parse_program(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
    prop_assert_eq!(&again, p);
    prop_assert_eq!(pretty_print(&again), text);
    Ok(())
}

proptest! {
    #[test]
    fn generated_programs_round_trip(seed in any::<u64>(), weak in 0i64..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let text = common::programs::random_program(&mut rng, 8, 12, weak).text();
        round_trips(&parse_program(&text).unwrap())?;
    }

    #[test]
    fn non_ground_rule_mixes_round_trip(picks in prop::collection::vec(0..NON_GROUND.len(), 0..8)) {
        let text: Vec<&str> = picks.iter().map(|&i| NON_GROUND[i]).collect();
        round_trips(&parse_program(&text.join("\n")).unwrap())?;
    }

    #[test]
    fn whitespace_and_comments_are_insignificant(picks in prop::collection::vec(0..NON_GROUND.len(), 1..5)) {
        let plain: Vec<&str> = picks.iter().map(|&i| NON_GROUND[i]).collect();
        let noisy: Vec<String> = plain.iter().map(|r| format!("  % note\n{}\n\n", r.replace(", ", " ,\t"))).collect();
        prop_assert_eq!(parse_program(&plain.join(" ")).unwrap(), parse_program(&noisy.concat()).unwrap());
    }
}
