use crate::baselines::lm::{model1_rank, Smoothing};
use crate::baselines::stats::CollectionStatistics;
use crate::corpus::WordId;
use crate::error::Result;
use crate::model::Parameters;
use crate::ranking::Ranking;
use crate::scalar::Scalar;

/// Appends the `k` embedding-space neighbours of every query term. Original
/// and added terms carry equal weight; repeats are kept.
pub fn expand_query<T: Scalar>(params: &Parameters<T>, query: &[WordId], k: usize) -> Result<Vec<WordId>> {
    let mut out = query.to_vec();
    if k == 0 {
        return Ok(out);
    }
    for &t in query {
        for (w, _) in params.nearest_words(t as usize, k)? {
            out.push(w as WordId);
        }
    }
    Ok(out)
}

/// Model 1 over the expanded query.
pub fn expanded_query_rank<T: Scalar>(
    params: &Parameters<T>,
    stats: &CollectionStatistics,
    query_id: &str,
    query: &[WordId],
    k: usize,
    smoothing: Smoothing,
) -> Result<Ranking> {
    let expanded = expand_query(params, query, k)?;
    model1_rank(stats, query_id, &expanded, smoothing)
}
