//! The log-linear expertise model: per-word candidate distributions, their
//! bag-of-words aggregation, ranking, entropy diagnostics and embedding-space
//! neighbours.

mod io;
mod params;

pub use io::{FORMAT_VERSION, MAGIC};
pub use params::{normalized_entropy, CandidateDistribution, Parameters};

use crate::corpus::{CandidateRegistry, Tokenizer, Vocabulary};
use crate::error::{Error, Result};
use crate::ranking::Ranking;
use crate::scalar::Scalar;

/// Trained parameters together with the vocabulary and candidate index they
/// were trained against.
#[derive(Debug, Clone, PartialEq)]
pub struct LogLinearModel<T> {
    pub params: Parameters<T>,
    pub vocabulary: Vocabulary,
    pub registry: CandidateRegistry,
}

impl<T: Scalar> LogLinearModel<T> {
    pub fn new(params: Parameters<T>, vocabulary: Vocabulary, registry: CandidateRegistry) -> Result<Self> {
        if params.vocab_size() != vocabulary.len() || params.n_candidates() != registry.len() {
            return Err(Error::ShapeMismatch(format!(
                "parameters are |V|={} |C|={}, tables are |V|={} |C|={}",
                params.vocab_size(),
                params.n_candidates(),
                vocabulary.len(),
                registry.len()
            )));
        }
        Ok(LogLinearModel {
            params,
            vocabulary,
            registry,
        })
    }

    /// Query term ids. Unknown terms are skipped when `skip_oov`, otherwise
    /// they are an error.
    pub fn query_ids(&self, tokenizer: &Tokenizer, text: &str, skip_oov: bool) -> Result<Vec<usize>> {
        let mut ids = Vec::new();
        for tok in tokenizer.tokenize(text) {
            match self.vocabulary.id(&tok) {
                Some(id) => ids.push(id as usize),
                None if skip_oov => {}
                None => return Err(Error::UnknownTerm(tok)),
            }
        }
        if ids.is_empty() {
            return Err(Error::UnanswerableQuery);
        }
        Ok(ids)
    }

    /// Ranks all candidates by normalized log-probability.
    pub fn rank(&self, tokenizer: &Tokenizer, query_id: &str, text: &str, skip_oov: bool) -> Result<Ranking> {
        let ids = self.query_ids(tokenizer, text, skip_oov)?;
        self.rank_ids(query_id, &ids)
    }

    pub fn rank_ids(&self, query_id: &str, ids: &[usize]) -> Result<Ranking> {
        let dist = self.params.sequence_distribution(ids)?;
        let scores: Vec<f64> = dist.log_probs.iter().map(|v| v.as_f64()).collect();
        Ok(Ranking::from_scores(query_id, &scores))
    }

    /// The `k` vocabulary tokens nearest to `term` in embedding space.
    pub fn nearest_terms(&self, term: &str, k: usize) -> Result<Vec<(String, T)>> {
        if k == 0 {
            return Err(Error::InvalidArgument("k must be ≥ 1".into()));
        }
        let id = self
            .vocabulary
            .id(term)
            .ok_or_else(|| Error::UnknownTerm(term.to_string()))?;
        Ok(self
            .params
            .nearest_words(id as usize, k)?
            .into_iter()
            .map(|(w, d)| (self.vocabulary.token(w as u32).unwrap_or_default().to_string(), d))
            .collect())
    }
}
