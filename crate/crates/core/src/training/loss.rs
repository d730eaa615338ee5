//! Batch cross-entropy with document-length scaling and L2 weight decay,
//! and its analytic gradient.
//!
//! For one window the prediction is `softmax(S)` with `S = Σ_k log_softmax(z_k)`
//! and `z_k = W_c v_k + b`. Writing the loss through `S` gives
//!
//! ```text
//! ∂H/∂S   = p̃ · Σt − t
//! ∂H/∂z_k = ∂H/∂S − P_k · Σ(∂H/∂S)
//! ```
//!
//! which is the product/quotient chain over `Z₂` and the per-word softmaxes,
//! evaluated without forming the (underflow-prone) product of probabilities.

use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use crate::corpus::NGramInstance;
use crate::error::{Error, Result};
use crate::model::Parameters;
use crate::scalar::{log_softmax_in_place, Scalar};

/// Instances per parallel work unit. Fixed so reductions happen in the same
/// order regardless of thread count.
const CHUNK: usize = 32;

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct LossReport {
    pub cross_entropy_term: f64,
    pub regularization_term: f64,
    pub total: f64,
    pub instances_seen: usize,
}

/// Gradient of the batch loss.
#[derive(Debug, Clone, PartialEq)]
pub struct BatchGradients<T> {
    /// Cross-entropy gradient for each word embedding touched by the batch,
    /// keyed by word id. Weight decay is not included here; see `word_decay`.
    pub word: BTreeMap<usize, Vec<T>>,
    /// Weight-decay coefficient `λ/m` applied to every embedding.
    pub word_decay: T,
    /// `|C| × e`, weight decay included.
    pub candidate: Vec<T>,
    /// `|C|`, never decayed.
    pub bias: Vec<T>,
    pub loss: LossReport,
}

impl<T: Scalar> BatchGradients<T> {
    /// Full gradient for one word embedding.
    pub fn word_gradient(&self, params: &Parameters<T>, word: usize) -> Vec<T> {
        let theta = params.word_embedding(word);
        match self.word.get(&word) {
            Some(g) => g.iter().zip(theta).map(|(&g, &t)| g + self.word_decay * t).collect(),
            None => theta.iter().map(|&t| self.word_decay * t).collect(),
        }
    }

    /// Dense `|V| × e` gradient (transposed projection layout).
    pub fn dense_word_gradient(&self, params: &Parameters<T>) -> Vec<T> {
        (0..params.vocab_size())
            .flat_map(|w| self.word_gradient(params, w))
            .collect()
    }

    pub fn is_finite(&self) -> bool {
        self.word.values().flatten().chain(&self.candidate).chain(&self.bias).all(|v| v.is_finite())
    }
}

fn check_batch(batch: &[NGramInstance], d_max: usize, vocab_size: usize) -> Result<()> {
    if batch.is_empty() {
        return Err(Error::InvalidArgument("empty batch".into()));
    }
    for inst in batch {
        if inst.doc_len == 0 {
            return Err(Error::InvalidArgument(format!(
                "instance from document {} has length 0",
                inst.source_doc
            )));
        }
        if let Some(&w) = inst.word_ids.iter().find(|&&w| w as usize >= vocab_size) {
            return Err(Error::InvalidWordId {
                id: w as usize,
                size: vocab_size,
            });
        }
    }
    if d_max == 0 {
        return Err(Error::InvalidArgument("maximum document length must be ≥ 1".into()));
    }
    Ok(())
}

/// `d_max / |d|`, the per-instance length scaling.
pub fn length_weight(d_max: usize, doc_len: usize) -> f64 {
    d_max as f64 / doc_len as f64
}

fn regularization<T: Scalar>(params: &Parameters<T>, lambda: f64, m: usize) -> f64 {
    if lambda == 0.0 {
        return 0.0;
    }
    let sq = |v: &[T]| v.iter().map(|x| x.as_f64() * x.as_f64()).sum::<f64>();
    lambda / (2.0 * m as f64) * (sq(params.word_embeddings()) + sq(params.candidate_matrix()))
}

/// Forward pass for one window: per-word log-probabilities (`n × |C|`,
/// row-major) and the renormalized log-prediction.
fn forward<T: Scalar>(params: &Parameters<T>, words: &[u32], per_word: &mut [T], pred: &mut [T]) {
    let c = params.n_candidates();
    pred.iter_mut().for_each(|v| *v = T::zero());
    for (k, &w) in words.iter().enumerate() {
        let row = &mut per_word[k * c..(k + 1) * c];
        params.word_log_probs_into(w as usize, row);
        for (p, &lp) in pred.iter_mut().zip(row.iter()) {
            *p += lp;
        }
    }
    log_softmax_in_place(pred);
}

fn cross_entropy<T: Scalar>(target: &[(usize, f64)], log_pred: &[T]) -> f64 {
    target.iter().map(|&(c, t)| -t * log_pred[c].as_f64()).sum()
}

/// Loss of `params` on `batch`.
pub fn batch_loss<T: Scalar>(
    params: &Parameters<T>,
    batch: &[NGramInstance],
    lambda: f64,
    d_max: usize,
) -> Result<LossReport> {
    check_batch(batch, d_max, params.vocab_size())?;
    let m = batch.len();
    let c = params.n_candidates();
    let ce_sum: f64 = batch
        .par_chunks(CHUNK)
        .map(|chunk| {
            let n = chunk.iter().map(|i| i.word_ids.len()).max().unwrap_or(0);
            let mut per_word = vec![T::zero(); n * c];
            let mut pred = vec![T::zero(); c];
            chunk
                .iter()
                .map(|inst| {
                    forward(params, &inst.word_ids, &mut per_word, &mut pred);
                    length_weight(d_max, inst.doc_len) * cross_entropy(&inst.target, &pred)
                })
                .sum::<f64>()
        })
        .collect::<Vec<f64>>()
        .into_iter()
        .sum();
    let ce = ce_sum / m as f64;
    let reg = regularization(params, lambda, m);
    Ok(LossReport {
        cross_entropy_term: ce,
        regularization_term: reg,
        total: ce + reg,
        instances_seen: m,
    })
}

struct Partial<T> {
    ce: f64,
    word: BTreeMap<usize, Vec<T>>,
    candidate: Vec<T>,
    bias: Vec<T>,
}

/// Distinct words of a chunk with their log-probabilities, computed once.
struct WordCache<T> {
    slot: HashMap<u32, usize>,
    words: Vec<usize>,
    log_probs: Vec<T>,
}

impl<T: Scalar> WordCache<T> {
    fn new(params: &Parameters<T>, chunk: &[NGramInstance]) -> Self {
        let c = params.n_candidates();
        let mut cache = WordCache {
            slot: HashMap::new(),
            words: Vec::new(),
            log_probs: Vec::new(),
        };
        for &w in chunk.iter().flat_map(|i| &i.word_ids) {
            if let Entry::Vacant(v) = cache.slot.entry(w) {
                v.insert(cache.words.len());
                cache.words.push(w as usize);
                let start = cache.log_probs.len();
                cache.log_probs.resize(start + c, T::zero());
                params.word_log_probs_into(w as usize, &mut cache.log_probs[start..]);
            }
        }
        cache
    }

    fn row(&self, slot: usize, c: usize) -> &[T] {
        &self.log_probs[slot * c..(slot + 1) * c]
    }
}

fn chunk_gradients<T: Scalar>(params: &Parameters<T>, chunk: &[NGramInstance], m: usize, d_max: usize) -> Partial<T> {
    let c = params.n_candidates();
    let e = params.dim();
    let cache = WordCache::new(params, chunk);
    // ∂L/∂z summed over every occurrence of each distinct word
    let mut g_word = vec![T::zero(); cache.words.len() * c];
    let mut slots = Vec::new();
    let mut pred = vec![T::zero(); c];
    let mut g_s = vec![T::zero(); c];
    let mut ce = 0.0;
    for inst in chunk {
        slots.clear();
        slots.extend(inst.word_ids.iter().map(|w| cache.slot[w]));
        pred.iter_mut().for_each(|v| *v = T::zero());
        for &s in &slots {
            for (p, &lp) in pred.iter_mut().zip(cache.row(s, c)) {
                *p += lp;
            }
        }
        log_softmax_in_place(&mut pred);
        let weight = length_weight(d_max, inst.doc_len);
        ce += weight * cross_entropy(&inst.target, &pred);

        // ∂L/∂S = scale · (p̃ · Σt − t)
        let scale = T::of_f64(weight / m as f64);
        let t_sum = T::of_f64(inst.target.iter().map(|t| t.1).sum());
        for (g, &lp) in g_s.iter_mut().zip(&pred) {
            *g = lp.exp() * t_sum;
        }
        for &(cand, t) in inst.target.iter() {
            g_s[cand] -= T::of_f64(t);
        }
        for g in g_s.iter_mut() {
            *g *= scale;
        }
        let g_s_sum: T = g_s.iter().copied().sum();

        for &s in &slots {
            let log_p = cache.row(s, c);
            let gz = &mut g_word[s * c..(s + 1) * c];
            for j in 0..c {
                gz[j] += g_s[j] - log_p[j].exp() * g_s_sum;
            }
        }
    }

    let mut out = Partial {
        ce,
        word: BTreeMap::new(),
        candidate: vec![T::zero(); c * e],
        bias: vec![T::zero(); c],
    };
    for (s, &w) in cache.words.iter().enumerate() {
        let v = params.word_embedding(w);
        let mut dv = vec![T::zero(); e];
        for j in 0..c {
            let gz = g_word[s * c + j];
            out.bias[j] += gz;
            let row = params.candidate_row(j);
            let drow = &mut out.candidate[j * e..(j + 1) * e];
            for d in 0..e {
                drow[d] += gz * v[d];
                dv[d] += gz * row[d];
            }
        }
        out.word.insert(w, dv);
    }
    out
}

/// Analytic gradient of [`batch_loss`].
pub fn batch_gradients<T: Scalar>(
    params: &Parameters<T>,
    batch: &[NGramInstance],
    lambda: f64,
    d_max: usize,
) -> Result<BatchGradients<T>> {
    check_batch(batch, d_max, params.vocab_size())?;
    let m = batch.len();
    let partials: Vec<Partial<T>> = batch
        .par_chunks(CHUNK)
        .map(|chunk| chunk_gradients(params, chunk, m, d_max))
        .collect();

    let mut iter = partials.into_iter();
    let mut acc = iter.next().expect("non-empty batch");
    for p in iter {
        acc.ce += p.ce;
        for (a, b) in acc.candidate.iter_mut().zip(&p.candidate) {
            *a += *b;
        }
        for (a, b) in acc.bias.iter_mut().zip(&p.bias) {
            *a += *b;
        }
        for (w, g) in p.word {
            match acc.word.get_mut(&w) {
                Some(dst) => dst.iter_mut().zip(&g).for_each(|(a, b)| *a += *b),
                None => {
                    acc.word.insert(w, g);
                }
            }
        }
    }

    let decay = T::of_f64(lambda / m as f64);
    if lambda != 0.0 {
        for (g, &theta) in acc.candidate.iter_mut().zip(params.candidate_matrix()) {
            *g += decay * theta;
        }
    }
    let ce = acc.ce / m as f64;
    let reg = regularization(params, lambda, m);
    Ok(BatchGradients {
        word: acc.word,
        word_decay: decay,
        candidate: acc.candidate,
        bias: acc.bias,
        loss: LossReport {
            cross_entropy_term: ce,
            regularization_term: reg,
            total: ce + reg,
            instances_seen: m,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    fn inst(words: &[u32], doc_len: usize, target: &[(usize, f64)]) -> NGramInstance {
        NGramInstance {
            word_ids: words.to_vec(),
            source_doc: 0,
            doc_len,
            target: Arc::from(target.to_vec()),
        }
    }

    #[test]
    fn uniform_prediction_costs_log_c() {
        let p = Parameters::<f64>::zeros(5, 4, 2);
        let batch = vec![inst(&[2, 3], 10, &[(1, 1.0)]), inst(&[4, 4], 10, &[(0, 1.0)])];
        let r = batch_loss(&p, &batch, 0.0, 10).unwrap();
        assert!((r.cross_entropy_term - 4f64.ln()).abs() < 1e-12);
        assert_eq!(r.regularization_term, 0.0);
    }

    #[test]
    fn confident_prediction_costs_nothing() {
        let mut p = Parameters::<f64>::zeros(3, 2, 1);
        p.bias_mut().copy_from_slice(&[0.0, -800.0]);
        let r = batch_loss(&p, &[inst(&[2], 4, &[(0, 1.0)])], 0.0, 4).unwrap();
        assert_eq!(r.cross_entropy_term, 0.0);
    }

    #[test]
    fn length_scaling() {
        assert_eq!(length_weight(10, 10), 1.0);
        assert_eq!(length_weight(10, 5), 2.0);
        let p = Parameters::<f64>::zeros(5, 3, 2);
        let full = batch_loss(&p, &[inst(&[2], 10, &[(0, 1.0)])], 0.0, 10).unwrap();
        let half = batch_loss(&p, &[inst(&[2], 5, &[(0, 1.0)])], 0.0, 10).unwrap();
        assert!((half.cross_entropy_term - 2.0 * full.cross_entropy_term).abs() < 1e-12);
    }

    #[test]
    fn regularization_term_and_total() {
        let mut p = Parameters::<f64>::zeros(3, 2, 1);
        p.word_embeddings_mut().copy_from_slice(&[1.0, 2.0, 0.0]);
        p.candidate_matrix_mut().copy_from_slice(&[3.0, 0.0]);
        p.bias_mut().copy_from_slice(&[100.0, 0.0]);
        let r = batch_loss(&p, &[inst(&[2], 1, &[(0, 1.0)]), inst(&[2], 1, &[(0, 1.0)])], 0.5, 1).unwrap();
        // λ/(2m) · (1 + 4 + 9), bias excluded.
        assert!((r.regularization_term - 0.5 / 4.0 * 14.0).abs() < 1e-12);
        assert!((r.total - (r.cross_entropy_term + r.regularization_term)).abs() < 1e-12);
    }

    #[test]
    fn rejects_zero_length_documents() {
        let p = Parameters::<f64>::zeros(3, 2, 1);
        assert!(batch_loss(&p, &[inst(&[2], 0, &[(0, 1.0)])], 0.0, 3).is_err());
        assert!(batch_gradients(&p, &[], 0.0, 3).is_err());
    }

    #[test]
    fn absent_words_get_no_gradient_without_decay() {
        let p = crate::training::initialize::<f64>(6, 3, 2, 5).unwrap();
        let g = batch_gradients(&p, &[inst(&[2, 3], 4, &[(1, 1.0)])], 0.0, 4).unwrap();
        assert!(g.word_gradient(&p, 5).iter().all(|&v| v == 0.0));
        assert!(g.word.contains_key(&2) && g.word.contains_key(&3));
    }

    #[test]
    fn bias_gradient_sums_to_zero() {
        let p = crate::training::initialize::<f64>(6, 3, 2, 5).unwrap();
        let g = batch_gradients(&p, &[inst(&[2, 4, 5], 4, &[(0, 0.5), (2, 0.5)])], 0.0, 4).unwrap();
        assert!(g.bias.iter().sum::<f64>().abs() < 1e-9);
    }

    #[test]
    fn gradient_report_matches_loss() {
        let p = crate::training::initialize::<f64>(6, 3, 2, 5).unwrap();
        let batch = vec![inst(&[2, 4], 4, &[(0, 1.0)]), inst(&[1, 0], 2, &[(2, 1.0)])];
        let g = batch_gradients(&p, &batch, 0.01, 4).unwrap();
        let l = batch_loss(&p, &batch, 0.01, 4).unwrap();
        assert!((g.loss.total - l.total).abs() < 1e-12);
    }
}
