use std::collections::{BTreeSet, HashMap};
use std::hash::Hash;

use crate::error::{Error, Result};
use crate::ranking::{sort_entries, Ranking};

/// Multiplicative reciprocal-rank fusion of two orderings of the same keys:
/// `score(c) = 1/rank_a(c) · 1/rank_b(c)` with 1-based ranks.
///
/// Returns `(key, score)` best first, ties by ascending key.
pub fn reciprocal_rank_product<K>(a: &[K], b: &[K]) -> Result<Vec<(K, f64)>>
where
    K: Ord + Hash + Clone,
{
    let set_a: BTreeSet<&K> = a.iter().collect();
    let set_b: BTreeSet<&K> = b.iter().collect();
    if set_a != set_b || set_a.len() != a.len() || set_b.len() != b.len() {
        return Err(Error::CandidateSetMismatch);
    }
    let rank_b: HashMap<&K, usize> = b.iter().enumerate().map(|(i, k)| (k, i + 1)).collect();
    let mut fused: Vec<(K, f64)> = a
        .iter()
        .enumerate()
        .map(|(i, k)| (k.clone(), 1.0 / ((i + 1) * rank_b[k]) as f64))
        .collect();
    sort_entries(&mut fused);
    Ok(fused)
}

/// Ensemble of two rankings for the same query.
pub fn ensemble_rank(a: &Ranking, b: &Ranking) -> Result<Ranking> {
    let ka: Vec<usize> = a.candidates().collect();
    let kb: Vec<usize> = b.candidates().collect();
    Ok(Ranking {
        query_id: a.query_id.clone(),
        entries: reciprocal_rank_product(&ka, &kb)?,
    })
}
