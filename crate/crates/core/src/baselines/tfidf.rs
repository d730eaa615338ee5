use std::collections::HashMap;

use crate::baselines::lm::known_terms;
use crate::baselines::stats::CollectionStatistics;
use crate::corpus::WordId;
use crate::error::Result;
use crate::ranking::Ranking;

/// Cosine similarity between the query's TF-IDF vector and each candidate's
/// summed document vectors. Zero-norm vectors score 0.
pub fn tfidf_scores(stats: &CollectionStatistics, query: &[WordId]) -> Result<Vec<f64>> {
    let terms = known_terms(stats, query)?;
    let mut q: HashMap<WordId, f64> = HashMap::new();
    for t in terms {
        *q.entry(t).or_default() += 1.0;
    }
    for (t, w) in q.iter_mut() {
        *w *= stats.idf(*t);
    }
    let q_norm = q.values().map(|x| x * x).sum::<f64>().sqrt();
    Ok((0..stats.n_candidates())
        .map(|c| {
            let norm = stats.tfidf_norms[c];
            if q_norm == 0.0 || norm == 0.0 {
                return 0.0;
            }
            let v = &stats.tfidf_vectors[c];
            let dot: f64 = q.iter().map(|(t, w)| w * v.get(t).copied().unwrap_or(0.0)).sum();
            dot / (q_norm * norm)
        })
        .collect())
}

pub fn tfidf_rank(stats: &CollectionStatistics, query_id: &str, query: &[WordId]) -> Result<Ranking> {
    Ok(Ranking::from_scores(query_id, &tfidf_scores(stats, query)?))
}
