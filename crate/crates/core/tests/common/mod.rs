//! Independent reference implementations shared by the integration tests.
//! Everything here is plain f64 loops with no log-space tricks, written
//! against the formulas rather than against the library code.
#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sert::corpus::{Corpus, Document, NGramInstance, Vocabulary};
use sert::model::Parameters;
use sert::Params64;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random parameters with entries in ±scale.
pub fn random_params(r: &mut ChaCha8Rng, v: usize, c: usize, e: usize, scale: f64) -> Params64 {
    let proj: Vec<f64> = (0..e * v).map(|_| r.gen_range(-scale..scale)).collect();
    let wc: Vec<f64> = (0..c * e).map(|_| r.gen_range(-scale..scale)).collect();
    let b: Vec<f64> = (0..c).map(|_| r.gen_range(-scale..scale)).collect();
    Parameters::from_parts(e, v, c, &proj, wc, b).unwrap()
}

/// Reads the word column `w` through the public row-major projection.
pub fn column(p: &Params64, w: usize) -> Vec<f64> {
    let proj = p.projection_row_major();
    (0..p.dim()).map(|k| proj[k * p.vocab_size() + w]).collect()
}

/// P(c | w) by direct exponentiation.
pub fn naive_word_probs(p: &Params64, w: usize) -> Vec<f64> {
    let col = column(p, w);
    let wc = p.candidate_matrix();
    let e = p.dim();
    let exps: Vec<f64> = (0..p.n_candidates())
        .map(|c| {
            let mut z = p.bias()[c];
            for k in 0..e {
                z += wc[c * e + k] * col[k];
            }
            z.exp()
        })
        .collect();
    let z1: f64 = exps.iter().sum();
    exps.iter().map(|x| x / z1).collect()
}

/// Product of per-word probabilities, renormalized.
pub fn naive_sequence_probs(p: &Params64, words: &[usize]) -> Vec<f64> {
    let mut prod = vec![1.0; p.n_candidates()];
    for &w in words {
        for (acc, q) in prod.iter_mut().zip(naive_word_probs(p, w)) {
            *acc *= q;
        }
    }
    let z2: f64 = prod.iter().sum();
    prod.iter().map(|x| x / z2).collect()
}

pub fn instance(words: Vec<u32>, doc_len: usize, target: Vec<(usize, f64)>) -> NGramInstance {
    NGramInstance {
        word_ids: words,
        source_doc: 0,
        doc_len,
        target: Arc::from(target),
    }
}

/// A random batch of `m` windows of width `n`, with random document lengths
/// in `1..=d_max` and targets spread over 1 or 2 candidates.
pub fn random_batch(r: &mut ChaCha8Rng, m: usize, n: usize, v: usize, c: usize, d_max: usize) -> Vec<NGramInstance> {
    (0..m)
        .map(|_| {
            let words = (0..n).map(|_| r.gen_range(0..v) as u32).collect();
            let first = r.gen_range(0..c);
            let target = if c > 1 && r.gen::<bool>() {
                let second = (first + r.gen_range(1..c)) % c;
                let mut t = vec![(first, 0.5), (second, 0.5)];
                t.sort_by_key(|x| x.0);
                t
            } else {
                vec![(first, 1.0)]
            };
            instance(words, r.gen_range(1..=d_max), target)
        })
        .collect()
}

/// Loss of the batch: scaled cross-entropy plus weight decay.
pub fn naive_loss(p: &Params64, batch: &[NGramInstance], lambda: f64, d_max: usize) -> f64 {
    let m = batch.len() as f64;
    let mut ce = 0.0;
    for inst in batch {
        let words: Vec<usize> = inst.word_ids.iter().map(|&w| w as usize).collect();
        let pred = naive_sequence_probs(p, &words);
        let h: f64 = inst.target.iter().map(|&(c, t)| -t * pred[c].ln()).sum();
        ce += d_max as f64 / inst.doc_len as f64 * h;
    }
    let sq: f64 = p
        .word_embeddings()
        .iter()
        .chain(p.candidate_matrix())
        .map(|x| x * x)
        .sum();
    ce / m + lambda / (2.0 * m) * sq
}

/// Gradients in the layout of the library: word rows (`|V| × e`), candidate
/// rows (`|C| × e`) and bias.
#[derive(Debug, Clone)]
pub struct DenseGrads {
    pub word: Vec<f64>,
    pub candidate: Vec<f64>,
    pub bias: Vec<f64>,
}

/// Gradient through probability space: per-word softmax Jacobians, the
/// product rule across window words, and the quotient rule for the
/// renormalization.
pub fn product_quotient_gradients(p: &Params64, batch: &[NGramInstance], lambda: f64, d_max: usize) -> DenseGrads {
    let (v, c, e) = (p.vocab_size(), p.n_candidates(), p.dim());
    let m = batch.len() as f64;
    let wc = p.candidate_matrix();
    let mut g = DenseGrads {
        word: vec![0.0; v * e],
        candidate: vec![0.0; c * e],
        bias: vec![0.0; c],
    };
    for inst in batch {
        let scale = d_max as f64 / inst.doc_len as f64 / m;
        let words: Vec<usize> = inst.word_ids.iter().map(|&w| w as usize).collect();
        let per_word: Vec<Vec<f64>> = words.iter().map(|&w| naive_word_probs(p, w)).collect();
        let prod: Vec<f64> = (0..c).map(|j| per_word.iter().map(|pw| pw[j]).product()).collect();
        let z2: f64 = prod.iter().sum();
        let pred: Vec<f64> = prod.iter().map(|x| x / z2).collect();
        let mut target = vec![0.0; c];
        for &(j, t) in inst.target.iter() {
            target[j] += t;
        }
        // dL/dpred
        let d_pred: Vec<f64> = (0..c).map(|j| -scale * target[j] / pred[j]).collect();
        // quotient rule: dpred_j/dprod_l = (δ_jl z2 - prod_j) / z2²
        let d_prod: Vec<f64> = (0..c)
            .map(|l| {
                (0..c)
                    .map(|j| {
                        let delta = if j == l { z2 } else { 0.0 };
                        d_pred[j] * (delta - prod[j]) / (z2 * z2)
                    })
                    .sum()
            })
            .collect();
        for (k, &w) in words.iter().enumerate() {
            // product rule: dprod_j/dP_k(j) = Π_{i≠k} P_i(j)
            let d_pk: Vec<f64> = (0..c)
                .map(|j| {
                    let others: f64 = per_word
                        .iter()
                        .enumerate()
                        .filter(|&(i, _)| i != k)
                        .map(|(_, pw)| pw[j])
                        .product();
                    d_prod[j] * others
                })
                .collect();
            // softmax Jacobian: dP_k(j)/dz_i = P_k(j)(δ_ji - P_k(i))
            let pk = &per_word[k];
            let d_z: Vec<f64> = (0..c)
                .map(|i| {
                    (0..c)
                        .map(|j| {
                            let delta = if i == j { 1.0 } else { 0.0 };
                            d_pk[j] * pk[j] * (delta - pk[i])
                        })
                        .sum()
                })
                .collect();
            let col = column(p, w);
            for i in 0..c {
                g.bias[i] += d_z[i];
                for d in 0..e {
                    g.candidate[i * e + d] += d_z[i] * col[d];
                    g.word[w * e + d] += d_z[i] * wc[i * e + d];
                }
            }
        }
    }
    for (gw, &t) in g.word.iter_mut().zip(p.word_embeddings()) {
        *gw += lambda / m * t;
    }
    for (gc, &t) in g.candidate.iter_mut().zip(p.candidate_matrix()) {
        *gc += lambda / m * t;
    }
    g
}

/// `|a - b| / max(|a|, |b|, floor)`.
pub fn rel_err(a: f64, b: f64, floor: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(floor)
}

pub fn max_rel_err(a: &[f64], b: &[f64], floor: f64) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(&x, &y)| rel_err(x, y, floor)).fold(0.0, f64::max)
}

/// A tiny raw collection for the baseline oracles: per document its token
/// list and associated candidates.
#[derive(Debug, Clone)]
pub struct ToyCollection {
    pub docs: Vec<(Vec<u32>, Vec<usize>)>,
    pub n_candidates: usize,
    pub vocab: usize,
}

/// Random collection over token ids `2..2+vocab` (ids 0 and 1 are reserved).
pub fn random_collection(r: &mut ChaCha8Rng, max_docs: usize, max_c: usize, max_v: usize) -> ToyCollection {
    let n_docs = r.gen_range(1..=max_docs);
    let n_candidates = r.gen_range(1..=max_c);
    let vocab = r.gen_range(1..=max_v);
    let docs = (0..n_docs)
        .map(|_| {
            let len = r.gen_range(1..=8);
            let tokens = (0..len).map(|_| 2 + r.gen_range(0..vocab) as u32).collect();
            let mut assoc: Vec<usize> = (0..n_candidates).filter(|_| r.gen_bool(0.5)).collect();
            if assoc.is_empty() && r.gen_bool(0.7) {
                assoc.push(r.gen_range(0..n_candidates));
            }
            (tokens, assoc)
        })
        .collect();
    ToyCollection {
        docs,
        n_candidates,
        vocab,
    }
}

impl ToyCollection {
    /// Wraps the collection in a [`Corpus`] with tokens `t2, t3, ...`.
    pub fn corpus(&self) -> Corpus {
        let mut counts: BTreeMap<String, u64> = BTreeMap::new();
        for (tokens, _) in &self.docs {
            for &t in tokens {
                *counts.entry(format!("t{t:02}")).or_default() += 1;
            }
        }
        let vocabulary = Vocabulary::from_counts(counts.into_iter().collect(), 0, usize::MAX).unwrap();
        let registry = sert::corpus::CandidateRegistry::from_names((0..self.n_candidates).map(|c| format!("c{c}")));
        let documents = self
            .docs
            .iter()
            .enumerate()
            .map(|(i, (tokens, assoc))| Document {
                doc_id: format!("d{i}"),
                tokens: tokens
                    .iter()
                    .map(|&t| vocabulary.id(&format!("t{t:02}")).unwrap())
                    .collect(),
                associations: assoc.clone(),
            })
            .collect();
        Corpus {
            vocabulary,
            registry,
            documents,
        }
    }

    fn tf(tokens: &[u32], t: u32) -> f64 {
        tokens.iter().filter(|&&x| x == t).count() as f64
    }

    fn total(&self) -> f64 {
        self.docs.iter().map(|d| d.0.len() as f64).sum()
    }

    pub fn collection_prob(&self, t: u32) -> f64 {
        self.docs.iter().map(|d| Self::tf(&d.0, t)).sum::<f64>() / self.total()
    }

    pub fn avg_doc_len(&self) -> f64 {
        self.total() / self.docs.len() as f64
    }

    fn smoothed(tf: f64, len: f64, pc: f64, jm: Option<f64>, beta: f64) -> f64 {
        match jm {
            Some(l) if len > 0.0 => (1.0 - l) * tf / len + l * pc,
            Some(_) => pc,
            None => (tf + beta * pc) / (len + beta),
        }
    }

    /// Query terms that occur somewhere in the collection.
    fn known(&self, query: &[u32]) -> Vec<u32> {
        query.iter().copied().filter(|&t| self.collection_prob(t) > 0.0).collect()
    }

    /// Profile-centric score: log-likelihood of the query under the
    /// concatenation of the candidate's documents.
    pub fn model1(&self, query: &[u32], jm: Option<f64>, beta: f64) -> Vec<f64> {
        let q = self.known(query);
        (0..self.n_candidates)
            .map(|c| {
                let profile: Vec<u32> = self
                    .docs
                    .iter()
                    .filter(|d| d.1.contains(&c))
                    .flat_map(|d| d.0.iter().copied())
                    .collect();
                q.iter()
                    .map(|&t| Self::smoothed(Self::tf(&profile, t), profile.len() as f64, self.collection_prob(t), jm, beta).ln())
                    .sum()
            })
            .collect()
    }

    /// Document-centric score `Σ_d p(q|d) a(d,c)`, returned as a log.
    pub fn model2(&self, query: &[u32], jm: Option<f64>, beta: f64) -> Vec<f64> {
        let q = self.known(query);
        (0..self.n_candidates)
            .map(|c| {
                let mut s = 0.0;
                for (tokens, assoc) in &self.docs {
                    if !assoc.contains(&c) {
                        continue;
                    }
                    let a = 1.0 / assoc.len() as f64;
                    let mut pq = 1.0;
                    for &t in &q {
                        pq *= Self::smoothed(Self::tf(tokens, t), tokens.len() as f64, self.collection_prob(t), jm, beta);
                    }
                    s += pq * a;
                }
                s.ln()
            })
            .collect()
    }

    fn idf(&self, t: u32) -> f64 {
        let df = self.docs.iter().filter(|d| d.0.contains(&t)).count() as f64;
        if df == 0.0 {
            0.0
        } else {
            (self.docs.len() as f64 / df).ln()
        }
    }

    /// Cosine between the query's tf-idf vector and the sum of the
    /// candidate's document vectors.
    pub fn tfidf(&self, query: &[u32]) -> Vec<f64> {
        let terms: Vec<u32> = (2..2 + self.vocab as u32).collect();
        let qv: Vec<f64> = terms.iter().map(|&t| Self::tf(query, t) * self.idf(t)).collect();
        let qn = qv.iter().map(|x| x * x).sum::<f64>().sqrt();
        (0..self.n_candidates)
            .map(|c| {
                let cv: Vec<f64> = terms
                    .iter()
                    .map(|&t| {
                        self.docs
                            .iter()
                            .filter(|d| d.1.contains(&c))
                            .map(|d| Self::tf(&d.0, t) * self.idf(t))
                            .sum()
                    })
                    .collect();
                let cn = cv.iter().map(|x| x * x).sum::<f64>().sqrt();
                if qn == 0.0 || cn == 0.0 {
                    0.0
                } else {
                    qv.iter().zip(&cv).map(|(a, b)| a * b).sum::<f64>() / (qn * cn)
                }
            })
            .collect()
    }

    /// Maps a raw query to corpus ids (tokens unknown to the corpus vanish).
    pub fn encode(&self, corpus: &Corpus, query: &[u32]) -> Vec<u32> {
        query
            .iter()
            .filter_map(|&t| corpus.vocabulary.id(&format!("t{t:02}")))
            .collect()
    }
}

/// Checks that `order` is a ranking consistent with `scores`: every
/// candidate appears once and no pair whose scores differ by more than `tol`
/// (relative) is inverted. Near-ties may come in either order, since the two
/// sides can round differently.
pub fn order_consistent(order: &[usize], scores: &[f64], tol: f64) -> bool {
    let mut seen = vec![false; scores.len()];
    for &c in order {
        if c >= scores.len() || seen[c] {
            return false;
        }
        seen[c] = true;
    }
    if order.len() != scores.len() {
        return false;
    }
    order.iter().enumerate().all(|(i, &a)| {
        order[i + 1..].iter().all(|&b| {
            let (x, y) = (scores[a], scores[b]);
            x >= y || x == y || (x - y).abs() <= tol * x.abs().max(y.abs()).max(1.0)
        })
    })
}

/// Ascending-id order for each score bucket, the reference tie rule.
pub fn reference_order(scores: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..scores.len()).collect();
    idx.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    idx
}

pub fn counts<I: IntoIterator<Item = usize>>(it: I) -> HashMap<usize, usize> {
    let mut m = HashMap::new();
    for x in it {
        *m.entry(x).or_default() += 1;
    }
    m
}

pub mod checks;
pub mod evalcases;
pub mod props;
