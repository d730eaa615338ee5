//! Comparison systems: generative Models 1 and 2, the TF-IDF entity vector
//! space, reciprocal-rank fusion and embedding-based query expansion.

mod expansion;
mod fusion;
mod lm;
mod stats;
mod tfidf;

pub use expansion::{expand_query, expanded_query_rank};
pub use fusion::{ensemble_rank, reciprocal_rank_product};
pub use lm::{model1_rank, model1_scores, model2_rank, model2_scores, Smoothing};
pub use stats::{AssociationWeighting, CollectionStatistics};
pub use tfidf::{tfidf_rank, tfidf_scores};

use crate::corpus::WordId;
use crate::error::{Error, Result};
use crate::ranking::Ranking;

/// A named baseline configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Baseline {
    Model1Jm,
    Model1Dirichlet,
    Model2Jm,
    Model2Dirichlet,
    Tfidf,
}

impl Baseline {
    pub const ALL: [Baseline; 5] = [
        Baseline::Model1Jm,
        Baseline::Model1Dirichlet,
        Baseline::Model2Jm,
        Baseline::Model2Dirichlet,
        Baseline::Tfidf,
    ];

    /// Run-file tag.
    pub fn tag(self) -> &'static str {
        match self {
            Baseline::Model1Jm => "model1-jm",
            Baseline::Model1Dirichlet => "model1-dirichlet",
            Baseline::Model2Jm => "model2-jm",
            Baseline::Model2Dirichlet => "model2-dirichlet",
            Baseline::Tfidf => "tfidf",
        }
    }

    pub fn from_tag(tag: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|b| b.tag() == tag)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown baseline {tag:?}")))
    }

    pub fn rank(self, stats: &CollectionStatistics, query_id: &str, query: &[WordId]) -> Result<Ranking> {
        match self {
            Baseline::Model1Jm => model1_rank(stats, query_id, query, Smoothing::jelinek_mercer()),
            Baseline::Model1Dirichlet => model1_rank(stats, query_id, query, Smoothing::dirichlet_for(stats)),
            Baseline::Model2Jm => model2_rank(stats, query_id, query, Smoothing::jelinek_mercer()),
            Baseline::Model2Dirichlet => model2_rank(stats, query_id, query, Smoothing::dirichlet_for(stats)),
            Baseline::Tfidf => tfidf_rank(stats, query_id, query),
        }
    }
}
