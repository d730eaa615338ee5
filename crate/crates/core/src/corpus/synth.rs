//! Deterministic synthetic expert-finding collections.
//!
//! Every candidate owns a disjoint pool of topical tokens. Documents are
//! written by a single candidate and draw from that pool (Zipf-weighted, so
//! some topical tokens are rare) mixed with shared noise tokens. One query per
//! candidate is drawn from its pool with the same weights; the owner is the
//! only relevant candidate.

use std::collections::HashSet;

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::document::{CandidateRegistry, RawDocument};
use crate::error::{Error, Result};
use crate::eval::Qrels;
use crate::query::Query;

/// Shape of the generated collection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SynthVariant {
    /// Topical tokens only.
    Plain,
    /// Every topical token has a synonym that documents use interchangeably;
    /// queries are written with one form only.
    Synonyms,
    /// Even candidates are reachable only through rare tokens that occur in a
    /// single document. Odd candidates are queried with a pair of synonymous
    /// forms that their own documents never use together, while one document
    /// of the left neighbour contains both.
    Mixed,
}

#[derive(Debug, Clone)]
pub struct SynthConfig {
    pub n_candidates: usize,
    pub docs_per_candidate: usize,
    pub vocab_per_candidate: usize,
    pub noise_rate: f64,
    pub seed: u64,
    pub doc_len: usize,
    pub noise_vocab: usize,
    pub min_query_len: usize,
    pub max_query_len: usize,
    /// Exponent of the Zipf weights used to pick topical tokens.
    pub zipf_exponent: f64,
    pub variant: SynthVariant,
}

impl SynthConfig {
    pub fn new(
        n_candidates: usize,
        docs_per_candidate: usize,
        vocab_per_candidate: usize,
        noise_rate: f64,
        seed: u64,
    ) -> Self {
        SynthConfig {
            n_candidates,
            docs_per_candidate,
            vocab_per_candidate,
            noise_rate,
            seed,
            doc_len: 60,
            noise_vocab: 200,
            min_query_len: 1,
            max_query_len: 4,
            zipf_exponent: 1.0,
            variant: SynthVariant::Plain,
        }
    }

    pub fn with_variant(mut self, variant: SynthVariant) -> Self {
        self.variant = variant;
        self
    }

    fn validate(&self) -> Result<()> {
        let counts = [
            self.n_candidates,
            self.docs_per_candidate,
            self.vocab_per_candidate,
            self.doc_len,
            self.noise_vocab,
            self.min_query_len,
        ];
        if counts.contains(&0) {
            return Err(Error::InvalidArgument("synthetic corpus counts must be ≥ 1".into()));
        }
        if !(0.0..1.0).contains(&self.noise_rate) {
            return Err(Error::InvalidArgument("noise rate must lie in [0, 1)".into()));
        }
        if self.max_query_len < self.min_query_len {
            return Err(Error::InvalidArgument("max query length below min".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SyntheticCorpus {
    pub documents: Vec<RawDocument>,
    pub registry: CandidateRegistry,
    pub queries: Vec<Query>,
    pub qrels: Qrels,
}

pub fn candidate_name(c: usize) -> String {
    format!("cand{c:03}")
}

pub fn topical_token(c: usize, k: usize) -> String {
    format!("c{c}t{k}")
}

fn synonym_token(c: usize, k: usize) -> String {
    format!("c{c}s{k}")
}

fn noise_token(k: usize) -> String {
    format!("noise{k}")
}

fn rare_token(c: usize, k: usize) -> String {
    format!("c{c}r{k}")
}

fn pair_token(c: usize, k: usize, form: usize) -> String {
    format!("c{c}p{k}{}", if form == 0 { 'a' } else { 'b' })
}

const RARE_PER_CANDIDATE: usize = 3;
/// Share of topical occurrences written in the synonym form.
const SYNONYM_RATE: f64 = 0.5;
/// Occurrences of each rare token inside its single host document.
const RARE_REPEAT: usize = 4;
const PAIRS_PER_CANDIDATE: usize = 3;
/// Copies of each pair form planted in the distractor document.
const DISTRACTOR_REPEAT: usize = 3;

fn insert_random<R: Rng>(rng: &mut R, tokens: &mut Vec<String>, token: String) {
    let pos = rng.gen_range(0..=tokens.len());
    tokens.insert(pos, token);
}

pub fn generate_synthetic_corpus(config: &SynthConfig) -> Result<SyntheticCorpus> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let zipf = WeightedIndex::new(
        (0..config.vocab_per_candidate).map(|r| 1.0 / ((r + 1) as f64).powf(config.zipf_exponent)),
    )
    .expect("positive weights");
    let n = config.n_candidates;
    let mixed = config.variant == SynthVariant::Mixed;

    let registry = CandidateRegistry::from_names((0..n).map(candidate_name));
    let mut corpus_tokens: Vec<Vec<Vec<String>>> = Vec::with_capacity(n);
    for c in 0..n {
        let mut doc_tokens: Vec<Vec<String>> = Vec::with_capacity(config.docs_per_candidate);
        for _ in 0..config.docs_per_candidate {
            let mut tokens = Vec::with_capacity(config.doc_len);
            for _ in 0..config.doc_len {
                if rng.gen::<f64>() < config.noise_rate {
                    tokens.push(noise_token(rng.gen_range(0..config.noise_vocab)));
                    continue;
                }
                let k = zipf.sample(&mut rng);
                if config.variant == SynthVariant::Synonyms && rng.gen::<f64>() < SYNONYM_RATE {
                    tokens.push(synonym_token(c, k));
                } else {
                    tokens.push(topical_token(c, k));
                }
            }
            doc_tokens.push(tokens);
        }
        corpus_tokens.push(doc_tokens);
    }

    if mixed {
        for c in 0..n {
            if c % 2 == 0 {
                // Each rare token lives in exactly one document.
                for k in 0..RARE_PER_CANDIDATE {
                    let d = rng.gen_range(0..config.docs_per_candidate);
                    for _ in 0..RARE_REPEAT {
                        insert_random(&mut rng, &mut corpus_tokens[c][d], rare_token(c, k));
                    }
                }
                continue;
            }
            // The two forms of a pair never share one of the owner's documents.
            for tokens in corpus_tokens[c].iter_mut() {
                for k in 0..PAIRS_PER_CANDIDATE {
                    if rng.gen::<bool>() {
                        let form = rng.gen_range(0..2);
                        insert_random(&mut rng, tokens, pair_token(c, k, form));
                    }
                }
            }
            // The right neighbour mentions single forms now and then.
            let leaky = (c + 1) % n;
            if leaky != c {
                for tokens in corpus_tokens[leaky].iter_mut() {
                    if rng.gen::<f64>() < 0.3 {
                        let (k, form) = (rng.gen_range(0..PAIRS_PER_CANDIDATE), rng.gen_range(0..2));
                        insert_random(&mut rng, tokens, pair_token(c, k, form));
                    }
                }
            }
            // The left neighbour has one document where both forms co-occur.
            let distractor = (c + n - 1) % n;
            if distractor != c {
                let d = rng.gen_range(0..config.docs_per_candidate);
                for k in 0..PAIRS_PER_CANDIDATE {
                    for form in 0..2 {
                        for _ in 0..DISTRACTOR_REPEAT {
                            insert_random(&mut rng, &mut corpus_tokens[distractor][d], pair_token(c, k, form));
                        }
                    }
                }
            }
        }
    }

    let mut documents = Vec::with_capacity(n * config.docs_per_candidate);
    let mut queries = Vec::with_capacity(n);
    let mut qrels = Qrels::default();
    for (c, doc_tokens) in corpus_tokens.into_iter().enumerate() {
        let seen: HashSet<String> = doc_tokens.iter().flatten().cloned().collect();
        for (j, tokens) in doc_tokens.into_iter().enumerate() {
            documents.push(RawDocument {
                doc_id: format!("doc{c:03}_{j:03}"),
                text: tokens.join(" "),
                candidates: vec![candidate_name(c)],
            });
        }

        let query_len = rng.gen_range(config.min_query_len..=config.max_query_len);
        let terms: Vec<String> = if mixed && c % 2 == 0 {
            let mut ks: Vec<usize> = (0..RARE_PER_CANDIDATE).collect();
            ks.shuffle(&mut rng);
            ks.into_iter()
                .take(query_len.min(RARE_PER_CANDIDATE))
                .map(|k| rare_token(c, k))
                .collect()
        } else if mixed {
            let k = rng.gen_range(0..PAIRS_PER_CANDIDATE);
            vec![pair_token(c, k, 0), pair_token(c, k, 1)]
        } else {
            // Distinct terms drawn with the document Zipf weights, restricted
            // to tokens that occur so every query is answerable. Synonym
            // queries stick to the frequent head of the topic.
            let pool = if config.variant == SynthVariant::Synonyms {
                (config.vocab_per_candidate / 4).max(1)
            } else {
                config.vocab_per_candidate
            };
            let ks: Vec<usize> = (0..pool)
                .filter(|&k| seen.contains(&topical_token(c, k)))
                .collect();
            ks.choose_multiple_weighted(&mut rng, query_len, |&k| {
                1.0 / ((k + 1) as f64).powf(config.zipf_exponent)
            })
            .expect("positive weights")
            .map(|&k| topical_token(c, k))
            .collect()
        };
        let qid = format!("q{c:03}");
        qrels.insert(&qid, &candidate_name(c), 1);
        queries.push(Query {
            id: qid,
            text: terms.join(" "),
        });
    }

    Ok(SyntheticCorpus {
        documents,
        registry,
        queries,
        qrels,
    })
}
