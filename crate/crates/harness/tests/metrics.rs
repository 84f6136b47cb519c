use las_harness::metrics::{f1, Confusion};
use proptest::prelude::*;

#[test]
fn hand_computed_scores() {
    let c = Confusion {
        tp: 1,
        fp: 1,
        tn: 0,
        fn_: 0,
    };
    assert_eq!(c.precision(), 0.5);
    assert_eq!(c.recall(), 1.0);
    assert!((c.f1() - 2.0 / 3.0).abs() < 1e-12);
    assert_eq!(c.accuracy(), 0.5);
}

#[test]
fn degenerate_counts_give_zero() {
    let c = Confusion {
        tp: 0,
        fp: 0,
        tn: 5,
        fn_: 0,
    };
    assert_eq!(c.precision(), 0.0);
    assert_eq!(c.recall(), 0.0);
    assert_eq!(c.f1(), 0.0);
    assert_eq!(f1(0.0, 0.0), 0.0);
}

proptest! {
    #[test]
    fn f1_matches_closed_form(tp in 0u64..50, fp in 0u64..50, tn in 0u64..50, fn_ in 0u64..50) {
        let c = Confusion { tp, fp, tn, fn_ };
        let expected = if tp == 0 { 0.0 } else { 2.0 * tp as f64 / (2 * tp + fp + fn_) as f64 };
        prop_assert!((c.f1() - expected).abs() < 1e-12);
    }
}
