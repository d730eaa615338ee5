use std::collections::HashMap;

use crate::corpus::{Corpus, WordId};

/// How a document's evidence is split among its candidates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AssociationWeighting {
    /// `a(d,c) = 1/|assoc(d)|`.
    #[default]
    Uniform,
    /// `a(d,c) = 1`.
    Boolean,
}

/// Term statistics of an encoded collection, plus the per-candidate views the
/// baseline rankers need.
#[derive(Debug, Clone)]
pub struct CollectionStatistics {
    pub(crate) doc_terms: Vec<HashMap<WordId, u32>>,
    pub(crate) doc_len: Vec<usize>,
    pub(crate) collection_tf: HashMap<WordId, u64>,
    pub(crate) doc_freq: HashMap<WordId, usize>,
    pub(crate) total_tokens: u64,
    /// Per document: `(candidate, a(d,c))`.
    pub(crate) doc_assoc: Vec<Vec<(usize, f64)>>,
    pub(crate) profile_terms: Vec<HashMap<WordId, u64>>,
    pub(crate) profile_len: Vec<u64>,
    pub(crate) n_candidates: usize,
    pub(crate) tfidf_vectors: Vec<HashMap<WordId, f64>>,
    pub(crate) tfidf_norms: Vec<f64>,
}

impl CollectionStatistics {
    pub fn new(corpus: &Corpus, weighting: AssociationWeighting) -> Self {
        let n_candidates = corpus.registry.len();
        let mut doc_terms = Vec::with_capacity(corpus.documents.len());
        let mut doc_len = Vec::with_capacity(corpus.documents.len());
        let mut collection_tf: HashMap<WordId, u64> = HashMap::new();
        let mut doc_freq: HashMap<WordId, usize> = HashMap::new();
        let mut doc_assoc = Vec::with_capacity(corpus.documents.len());
        let mut profile_terms = vec![HashMap::new(); n_candidates];
        let mut profile_len = vec![0u64; n_candidates];

        for doc in &corpus.documents {
            let mut tf: HashMap<WordId, u32> = HashMap::new();
            for &t in &doc.tokens {
                *tf.entry(t).or_default() += 1;
            }
            for (&t, &n) in &tf {
                *collection_tf.entry(t).or_default() += u64::from(n);
                *doc_freq.entry(t).or_default() += 1;
            }
            let share = match weighting {
                AssociationWeighting::Uniform if !doc.associations.is_empty() => {
                    1.0 / doc.associations.len() as f64
                }
                _ => 1.0,
            };
            for &c in &doc.associations {
                let profile: &mut HashMap<WordId, u64> = &mut profile_terms[c];
                for (&t, &n) in &tf {
                    *profile.entry(t).or_default() += u64::from(n);
                }
                profile_len[c] += doc.tokens.len() as u64;
            }
            doc_assoc.push(doc.associations.iter().map(|&c| (c, share)).collect());
            doc_len.push(doc.tokens.len());
            doc_terms.push(tf);
        }
        let total_tokens = doc_len.iter().map(|&l| l as u64).sum();

        let n_docs = corpus.documents.len() as f64;
        let idf = |t: WordId| (n_docs / doc_freq[&t] as f64).ln();
        let mut tfidf_vectors = vec![HashMap::new(); n_candidates];
        for (tf, assoc) in doc_terms.iter().zip(&corpus.documents) {
            for &c in &assoc.associations {
                let v: &mut HashMap<WordId, f64> = &mut tfidf_vectors[c];
                for (&t, &n) in tf {
                    *v.entry(t).or_default() += f64::from(n) * idf(t);
                }
            }
        }
        let tfidf_norms = tfidf_vectors
            .iter()
            .map(|v| v.values().map(|x| x * x).sum::<f64>().sqrt())
            .collect();

        CollectionStatistics {
            doc_terms,
            doc_len,
            collection_tf,
            doc_freq,
            total_tokens,
            doc_assoc,
            profile_terms,
            profile_len,
            n_candidates,
            tfidf_vectors,
            tfidf_norms,
        }
    }

    pub fn n_documents(&self) -> usize {
        self.doc_len.len()
    }

    pub fn n_candidates(&self) -> usize {
        self.n_candidates
    }

    pub fn average_document_length(&self) -> f64 {
        if self.doc_len.is_empty() {
            0.0
        } else {
            self.total_tokens as f64 / self.doc_len.len() as f64
        }
    }

    pub fn collection_frequency(&self, t: WordId) -> u64 {
        self.collection_tf.get(&t).copied().unwrap_or(0)
    }

    pub fn document_frequency(&self, t: WordId) -> usize {
        self.doc_freq.get(&t).copied().unwrap_or(0)
    }

    pub fn term_frequency(&self, doc: usize, t: WordId) -> u32 {
        self.doc_terms[doc].get(&t).copied().unwrap_or(0)
    }

    pub fn document_length(&self, doc: usize) -> usize {
        self.doc_len[doc]
    }

    pub fn profile_frequency(&self, c: usize, t: WordId) -> u64 {
        self.profile_terms[c].get(&t).copied().unwrap_or(0)
    }

    pub fn profile_length(&self, c: usize) -> u64 {
        self.profile_len[c]
    }

    /// `a(d,c)` pairs for document `doc`.
    pub fn associations(&self, doc: usize) -> &[(usize, f64)] {
        &self.doc_assoc[doc]
    }

    /// Maximum-likelihood collection model.
    pub fn collection_probability(&self, t: WordId) -> f64 {
        if self.total_tokens == 0 {
            return 0.0;
        }
        self.collection_frequency(t) as f64 / self.total_tokens as f64
    }

    /// `ln(|D| / df)`, zero for terms absent from the collection.
    pub fn idf(&self, t: WordId) -> f64 {
        match self.document_frequency(t) {
            0 => 0.0,
            df => (self.n_documents() as f64 / df as f64).ln(),
        }
    }

    /// Collection vocabulary (terms with non-zero frequency).
    pub fn terms(&self) -> impl Iterator<Item = WordId> + '_ {
        self.collection_tf.keys().copied()
    }
}
