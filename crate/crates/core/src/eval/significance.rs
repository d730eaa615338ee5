use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::eval::metrics::{Metric, MetricReport};

/// Largest query count for which every sign assignment is enumerated.
pub const EXACT_MAX_QUERIES: usize = 15;
pub const DEFAULT_PERMUTATIONS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestMethod {
    /// Exact below [`EXACT_MAX_QUERIES`], Monte Carlo above.
    Auto,
    Exact,
    MonteCarlo,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestOutcome {
    pub p_value: f64,
    /// Sign assignments examined (including the observed one for Monte Carlo).
    pub permutations: usize,
    pub exact: bool,
}

/// Two-tailed paired randomization test on the mean difference.
pub fn randomization_test(a: &[f64], b: &[f64], permutations: usize, seed: u64) -> Result<f64> {
    randomization_test_with(a, b, permutations, seed, TestMethod::Auto).map(|o| o.p_value)
}

pub fn randomization_test_with(
    a: &[f64],
    b: &[f64],
    permutations: usize,
    seed: u64,
    method: TestMethod,
) -> Result<TestOutcome> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    if a.len() < 2 {
        return Err(Error::InvalidArgument("randomization test needs ≥ 2 paired values".into()));
    }
    let diffs: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let observed: f64 = diffs.iter().sum::<f64>().abs();
    let scale: f64 = diffs.iter().map(|d| d.abs()).sum();
    // Sums that differ from the observed one only by rounding count as ties.
    let threshold = observed - 1e-12 * scale.max(1.0);

    let exact = match method {
        TestMethod::Exact => true,
        TestMethod::MonteCarlo => false,
        TestMethod::Auto => diffs.len() <= EXACT_MAX_QUERIES,
    };
    if exact {
        if diffs.len() > 30 {
            return Err(Error::InvalidArgument("exact enumeration limited to 30 pairs".into()));
        }
        let total = 1usize << diffs.len();
        let hits = (0..total)
            .filter(|mask| {
                let s: f64 = diffs
                    .iter()
                    .enumerate()
                    .map(|(i, &d)| if mask >> i & 1 == 1 { -d } else { d })
                    .sum();
                s.abs() >= threshold
            })
            .count();
        return Ok(TestOutcome {
            p_value: hits as f64 / total as f64,
            permutations: total,
            exact: true,
        });
    }

    if permutations == 0 {
        return Err(Error::InvalidArgument("permutation count must be ≥ 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 1usize;
    for _ in 0..permutations {
        let s: f64 = diffs
            .iter()
            .map(|&d| if rng.gen::<bool>() { -d } else { d })
            .sum();
        if s.abs() >= threshold {
            hits += 1;
        }
    }
    Ok(TestOutcome {
        p_value: hits as f64 / (permutations + 1) as f64,
        permutations: permutations + 1,
        exact: false,
    })
}

/// Benjamini-Hochberg step-up adjustment, returned in input order.
pub fn benjamini_hochberg(raw: &[f64]) -> Vec<f64> {
    let m = raw.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| raw[i].total_cmp(&raw[j]));
    let mut adjusted = vec![0.0; m];
    let mut running = 1.0f64;
    for (pos, &idx) in order.iter().enumerate().rev() {
        let candidate = raw[idx] * m as f64 / (pos + 1) as f64;
        running = running.min(candidate).min(1.0);
        adjusted[idx] = running;
    }
    adjusted
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignificanceResult {
    pub metric: String,
    /// Mean of `a - b` over the paired queries.
    pub mean_difference: f64,
    pub p_value: f64,
    pub adjusted_p_value: f64,
    pub permutations: usize,
}

/// Tests every metric of two reports over their shared queries and adjusts
/// the p-values jointly.
pub fn compare_reports(
    a: &MetricReport,
    b: &MetricReport,
    permutations: usize,
    seed: u64,
) -> Result<Vec<SignificanceResult>> {
    let shared: Vec<&String> = a.per_query.keys().filter(|q| b.per_query.contains_key(*q)).collect();
    if shared.is_empty() {
        return Err(Error::DisjointQueries);
    }
    let mut out = Vec::with_capacity(Metric::ALL.len());
    for m in Metric::ALL {
        let xs: Vec<f64> = shared.iter().map(|q| a.per_query[*q].get(m)).collect();
        let ys: Vec<f64> = shared.iter().map(|q| b.per_query[*q].get(m)).collect();
        let outcome = randomization_test_with(&xs, &ys, permutations, seed, TestMethod::Auto)?;
        let mean_difference = xs.iter().zip(&ys).map(|(x, y)| x - y).sum::<f64>() / xs.len() as f64;
        out.push(SignificanceResult {
            metric: m.name().to_string(),
            mean_difference,
            p_value: outcome.p_value,
            adjusted_p_value: outcome.p_value,
            permutations: outcome.permutations,
        });
    }
    let raw: Vec<f64> = out.iter().map(|r| r.p_value).collect();
    for (r, adj) in out.iter_mut().zip(benjamini_hochberg(&raw)) {
        r.adjusted_p_value = adj;
    }
    Ok(out)
}
