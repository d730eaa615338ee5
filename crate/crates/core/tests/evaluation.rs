mod common;

use common::evalcases::{examples, exact_vs_monte_carlo};

#[test]
fn worked_examples() {
    let failed: Vec<_> = examples().into_iter().filter(|(_, ok)| !ok).map(|(n, _)| n).collect();
    assert!(failed.is_empty(), "{failed:?}");
}

#[test]
fn exact_enumeration_agrees_with_sampling() {
    for z in exact_vs_monte_carlo(9, sert::eval::DEFAULT_PERMUTATIONS) {
        assert!(z <= 3.0, "{z}");
    }
}
