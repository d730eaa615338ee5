//! Worked metric and significance examples, shared with the acceptance gate.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sert::eval::*;
use sert::ranking::{Run, RunEntry};

fn judged(relevant: &[&str]) -> BTreeMap<String, u32> {
    relevant.iter().map(|c| (c.to_string(), 1)).collect()
}

fn names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("c{i}")).collect()
}

fn ranked(v: &[String]) -> impl Iterator<Item = &str> + Clone {
    v.iter().map(String::as_str)
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() < 1e-12
}

/// Each example with whether it holds.
pub fn examples() -> Vec<(&'static str, bool)> {
    let list = names(10);
    let mut out = Vec::new();
    let mut check = |name, ok| out.push((name, ok));

    check("ap perfect ranking", average_precision(ranked(&list), &judged(&["c1", "c2", "c3"])) == Some(1.0));
    check("ap single relevant at rank 3", average_precision(ranked(&list), &judged(&["c3"])).is_some_and(|a| close(a, 1.0 / 3.0)));
    check("ap ranks 1 and 4", average_precision(ranked(&list), &judged(&["c1", "c4"])) == Some(0.75));
    check("ap without relevant", average_precision(ranked(&list), &judged(&[])).is_none());
    check("rr first relevant", reciprocal_rank(ranked(&list), &judged(&["c1", "c7"])) == 1.0);
    let mut graded = judged(&["c1", "c2"]);
    graded.insert("c3".into(), 0);
    check("ndcg ideal binary", close(ndcg_at(ranked(&list), &graded, 100, GainMode::Exponential), 1.0));
    let p = judged(&["c2", "c4", "c8"]);
    check("p@5", precision_at(ranked(&list), &p, 5) == 0.4);
    check("p@10", precision_at(ranked(&list), &p, 10) == 0.3);

    let a = [0.3, 0.7, 0.1, 0.9];
    check("randomization identical", randomization_test(&a, &a, 1000, 1).is_ok_and(|p| p == 1.0));
    check("randomization identical monte carlo", randomization_test_with(&a, &a, 1000, 1, TestMethod::MonteCarlo).is_ok_and(|o| o.p_value == 1.0));
    check("randomization exact 2/8", randomization_test(&[1.0; 3], &[0.0; 3], 1000, 1).is_ok_and(|p| p == 0.25));
    check("randomization length mismatch", randomization_test(&[1.0; 3], &[0.0; 2], 10, 1).is_err());
    let long_a: Vec<f64> = (0..40).map(|i| (i % 7) as f64 / 7.0).collect();
    let long_b: Vec<f64> = (0..40).map(|i| (i % 5) as f64 / 5.0).collect();
    let p1 = randomization_test(&long_a, &long_b, 20_000, 1).unwrap();
    let p2 = randomization_test(&long_a, &long_b, 20_000, 2).unwrap();
    let se = (p1 * (1.0 - p1) / 20_000.0).sqrt().max(1.0 / 20_000.0);
    check("monte carlo seeds agree", (p1 - p2).abs() <= 3.0 * se * 2f64.sqrt() && p1 > 0.0);

    check("bh single", benjamini_hochberg(&[0.2]) == vec![0.2]);
    let bh = benjamini_hochberg(&[0.01, 0.04, 0.03]);
    check("bh step-up", bh.iter().zip([0.03, 0.04, 0.04]).all(|(x, y)| close(*x, y)));
    check("bh all ones", benjamini_hochberg(&[1.0; 4]) == vec![1.0; 4]);

    let x = [0.1, 0.5, 0.3, 0.9];
    check("pearson identical", pearson(&x, &x).is_ok_and(|r| close(r, 1.0)));
    check("pearson zero variance", pearson(&x, &[0.2; 4]).is_err());

    let mut run = Run::new("t");
    let entry = |c: &str| RunEntry { candidate: c.into(), score: 0.0 };
    run.queries.insert("q1".into(), vec![entry("a"), entry("b")]);
    let mut qrels = Qrels::default();
    qrels.insert("q1", "b", 2);
    qrels.insert("q2", "a", 1);
    qrels.insert("q3", "a", 0);
    let report = evaluate(&run, &qrels, GainMode::Exponential);
    check(
        "missing query scores zero",
        report.as_ref().is_ok_and(|r| r.per_query.len() == 2 && close(r.aggregate.ap, 0.25) && close(r.aggregate.rr, 0.25)),
    );
    let mut other = Qrels::default();
    other.insert("zz", "a", 1);
    check("disjoint queries", evaluate(&run, &other, GainMode::Exponential).is_err());
    out
}

/// Largest distance between exact and Monte Carlo p, in standard errors, over
/// ten random paired vectors of at most 15 queries.
pub fn exact_vs_monte_carlo(seed: u64, permutations: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..10)
        .map(|i| {
            let q = rng.gen_range(4..=15);
            let shift = rng.gen_range(0.0..0.3);
            let a: Vec<f64> = (0..q).map(|_| rng.gen::<f64>()).collect();
            let b: Vec<f64> = a.iter().map(|x| (x - shift + rng.gen_range(-0.4..0.4)).clamp(0.0, 1.0)).collect();
            let exact = randomization_test_with(&a, &b, 0, 0, TestMethod::Exact).unwrap();
            let mc = randomization_test_with(&a, &b, permutations, 100 + i, TestMethod::MonteCarlo).unwrap();
            assert!(exact.exact && !mc.exact);
            let n = mc.permutations as f64;
            let se = (exact.p_value * (1.0 - exact.p_value) / n).sqrt().max(1.0 / n);
            (exact.p_value - mc.p_value).abs() / se
        })
        .collect()
}
