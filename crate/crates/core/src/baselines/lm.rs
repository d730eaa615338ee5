//! Generative expert-finding language models with Jelinek-Mercer or Dirichlet
//! smoothing: profile-centric (Model 1) and document-centric (Model 2).

use crate::baselines::stats::CollectionStatistics;
use crate::corpus::WordId;
use crate::error::{Error, Result};
use crate::ranking::Ranking;
use crate::scalar::log_sum_exp;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Smoothing {
    /// `(1−λ) p_ml + λ p_collection`.
    JelinekMercer { lambda: f64 },
    /// `(tf + β p_collection) / (len + β)`.
    Dirichlet { beta: f64 },
}

impl Smoothing {
    pub const DEFAULT_JM_LAMBDA: f64 = 0.5;

    pub fn jelinek_mercer() -> Self {
        Smoothing::JelinekMercer {
            lambda: Self::DEFAULT_JM_LAMBDA,
        }
    }

    /// Dirichlet prior equal to the average document length.
    pub fn dirichlet_for(stats: &CollectionStatistics) -> Self {
        Smoothing::Dirichlet {
            beta: stats.average_document_length().max(f64::MIN_POSITIVE),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Smoothing::JelinekMercer { lambda } if !(0.0..=1.0).contains(&lambda) => {
                Err(Error::InvalidArgument("Jelinek-Mercer λ must lie in [0, 1]".into()))
            }
            Smoothing::Dirichlet { beta } if !(beta > 0.0) => {
                Err(Error::InvalidArgument("Dirichlet β must be > 0".into()))
            }
            _ => Ok(()),
        }
    }

    /// Smoothed `p(t | ·)` from a term count, the model length and the
    /// collection probability. An empty model falls back to the collection.
    pub fn probability(&self, tf: f64, len: f64, p_collection: f64) -> f64 {
        match *self {
            Smoothing::JelinekMercer { lambda } => {
                if len == 0.0 {
                    p_collection
                } else {
                    (1.0 - lambda) * tf / len + lambda * p_collection
                }
            }
            Smoothing::Dirichlet { beta } => (tf + beta * p_collection) / (len + beta),
        }
    }
}

/// Query terms that occur in the collection; at least one is required.
pub(crate) fn known_terms(stats: &CollectionStatistics, query: &[WordId]) -> Result<Vec<WordId>> {
    let terms: Vec<WordId> = query
        .iter()
        .copied()
        .filter(|&t| stats.collection_frequency(t) > 0)
        .collect();
    if terms.is_empty() {
        return Err(Error::UnanswerableQuery);
    }
    Ok(terms)
}

/// Profile-centric scores: `Σ_t log p(t | profile(c))`.
pub fn model1_scores(stats: &CollectionStatistics, query: &[WordId], smoothing: Smoothing) -> Result<Vec<f64>> {
    smoothing.validate()?;
    let terms = known_terms(stats, query)?;
    Ok((0..stats.n_candidates())
        .map(|c| {
            let len = stats.profile_length(c) as f64;
            terms
                .iter()
                .map(|&t| {
                    let tf = stats.profile_frequency(c, t) as f64;
                    smoothing.probability(tf, len, stats.collection_probability(t)).ln()
                })
                .sum()
        })
        .collect())
}

pub fn model1_rank(
    stats: &CollectionStatistics,
    query_id: &str,
    query: &[WordId],
    smoothing: Smoothing,
) -> Result<Ranking> {
    Ok(Ranking::from_scores(query_id, &model1_scores(stats, query, smoothing)?))
}

/// Document-centric scores: `log Σ_d p(q|d) · a(d,c)`.
///
/// Candidates without associated documents score `-inf`.
pub fn model2_scores(stats: &CollectionStatistics, query: &[WordId], smoothing: Smoothing) -> Result<Vec<f64>> {
    smoothing.validate()?;
    let terms = known_terms(stats, query)?;
    let mut per_candidate: Vec<Vec<f64>> = vec![Vec::new(); stats.n_candidates()];
    for d in 0..stats.n_documents() {
        let assoc = stats.associations(d);
        if assoc.is_empty() {
            continue;
        }
        let len = stats.document_length(d) as f64;
        let log_q: f64 = terms
            .iter()
            .map(|&t| {
                let tf = f64::from(stats.term_frequency(d, t));
                smoothing.probability(tf, len, stats.collection_probability(t)).ln()
            })
            .sum();
        for &(c, a) in assoc {
            per_candidate[c].push(log_q + a.ln());
        }
    }
    Ok(per_candidate.iter().map(|v| log_sum_exp(v)).collect())
}

pub fn model2_rank(
    stats: &CollectionStatistics,
    query_id: &str,
    query: &[WordId],
    smoothing: Smoothing,
) -> Result<Ranking> {
    Ok(Ranking::from_scores(query_id, &model2_scores(stats, query, smoothing)?))
}
