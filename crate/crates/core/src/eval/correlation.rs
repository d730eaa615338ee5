use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::eval::metrics::average_precision;
use crate::eval::qrels::Qrels;
use crate::model::normalized_entropy;
use crate::ranking::Run;

pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx <= 0.0 {
        return Err(Error::ZeroVariance("first variable"));
    }
    if syy <= 0.0 {
        return Err(Error::ZeroVariance("second variable"));
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Two-tailed permutation p-value for Pearson's r, shuffling the pairing.
pub fn pearson_permutation_test(x: &[f64], y: &[f64], permutations: usize, seed: u64) -> Result<(f64, f64)> {
    let r = pearson(x, y)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut shuffled = y.to_vec();
    let mut hits = 1usize;
    for _ in 0..permutations {
        shuffled.shuffle(&mut rng);
        if pearson(x, &shuffled)?.abs() >= r.abs() - 1e-12 {
            hits += 1;
        }
    }
    Ok((r, hits as f64 / (permutations + 1) as f64))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyPoint {
    pub query_id: String,
    pub entropy: f64,
    pub average_precision: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyCorrelation {
    pub r: f64,
    pub p_value: f64,
    pub points: Vec<EntropyPoint>,
}

/// Correlates per-query normalized entropy of the run's score distribution
/// with per-query average precision.
///
/// Run scores must be normalized log-probabilities covering every candidate.
pub fn entropy_ap_correlation(run: &Run, qrels: &Qrels, permutations: usize, seed: u64) -> Result<EntropyCorrelation> {
    let mut points = Vec::new();
    for (qid, entries) in &run.queries {
        let Some(judged) = qrels.get(qid) else { continue };
        let Some(ap) = average_precision(entries.iter().map(|e| e.candidate.as_str()), judged) else {
            continue;
        };
        let log_probs: Vec<f64> = entries.iter().map(|e| e.score).collect();
        points.push(EntropyPoint {
            query_id: qid.clone(),
            entropy: normalized_entropy(&log_probs)?,
            average_precision: ap,
        });
    }
    if points.len() < 3 {
        return Err(Error::InvalidArgument("entropy correlation needs ≥ 3 judged queries".into()));
    }
    let xs: Vec<f64> = points.iter().map(|p| p.entropy).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.average_precision).collect();
    let (r, p_value) = pearson_permutation_test(&xs, &ys, permutations, seed)?;
    Ok(EntropyCorrelation { r, p_value, points })
}
