//! Randomized oracle sweeps, shared with the acceptance gate.

use rand::Rng;
use sert::baselines::*;
use sert::training::{batch_gradients, batch_loss};
use sert::Params64;

use super::*;

pub const STEP: f64 = 1e-5;

pub fn central_difference<F: FnMut(&mut Params64, f64)>(p: &Params64, mut nudge: F, loss: &dyn Fn(&Params64) -> f64) -> f64 {
    let mut plus = p.clone();
    nudge(&mut plus, STEP);
    let mut minus = p.clone();
    nudge(&mut minus, -STEP);
    (loss(&plus) - loss(&minus)) / (2.0 * STEP)
}

/// Largest relative error between analytic and finite-difference gradients
/// over every parameter of one random configuration.
pub fn gradient_error(seed: u64, lambda: f64) -> f64 {
    let mut r = rng(seed);
    let v = r.gen_range(2..=10);
    let c = r.gen_range(2..=4);
    let e = r.gen_range(1..=3);
    let n = r.gen_range(1..=4);
    let m = r.gen_range(1..=4);
    let d_max = r.gen_range(n..=12);
    let p = random_params(&mut r, v, c, e, 1.0);
    let batch = random_batch(&mut r, m, n, v, c, d_max);
    let loss = |q: &Params64| batch_loss(q, &batch, lambda, d_max).unwrap().total;
    let g = batch_gradients(&p, &batch, lambda, d_max).unwrap();

    let mut worst: f64 = 0.0;
    let dense = g.dense_word_gradient(&p);
    for i in 0..v * e {
        let fd = central_difference(&p, |q, h| q.word_embeddings_mut()[i] += h, &loss);
        worst = worst.max(rel_err(dense[i], fd, 1e-6));
    }
    for i in 0..c * e {
        let fd = central_difference(&p, |q, h| q.candidate_matrix_mut()[i] += h, &loss);
        worst = worst.max(rel_err(g.candidate[i], fd, 1e-6));
    }
    for i in 0..c {
        let fd = central_difference(&p, |q, h| q.bias_mut()[i] += h, &loss);
        worst = worst.max(rel_err(g.bias[i], fd, 1e-6));
    }
    worst
}

/// Largest absolute error of `sequence_distribution` against the naive
/// product over `cases` random models, in 64 and 32 bits.
pub fn sequence_oracle_error(seed: u64, cases: usize) -> (f64, f64) {
    let mut r = rng(seed);
    let (mut worst, mut worst32) = (0.0f64, 0.0f64);
    for _ in 0..cases {
        let (v, c, e) = (r.gen_range(1..=10), r.gen_range(1..=4), r.gen_range(1..=3));
        let p = random_params(&mut r, v, c, e, 2.0);
        let words: Vec<usize> = (0..r.gen_range(1..=6)).map(|_| r.gen_range(0..v)).collect();
        let want = naive_sequence_probs(&p, &words);
        let got = p.sequence_distribution(&words).unwrap().probs();
        let got32 = p.cast::<f32>().sequence_distribution(&words).unwrap().probs();
        for ((a, a32), b) in got.iter().zip(&got32).zip(&want) {
            worst = worst.max((a - b).abs());
            worst32 = worst32.max((*a32 as f64 - b).abs());
        }
    }
    (worst, worst32)
}

/// Largest relative error of `batch_loss` against the naive loss.
pub fn loss_oracle_error(seed: u64, cases: usize) -> f64 {
    let mut r = rng(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..cases {
        let (v, c, e) = (r.gen_range(1..=10), r.gen_range(1..=4), r.gen_range(1..=3));
        let (n, m, d_max) = (r.gen_range(1..=4), r.gen_range(1..=6), r.gen_range(1..=12));
        let p = random_params(&mut r, v, c, e, 1.5);
        let batch = random_batch(&mut r, m, n, v, c, d_max);
        let lambda = [0.0, 0.01, 0.3][r.gen_range(0..3)];
        let report = batch_loss(&p, &batch, lambda, d_max).unwrap();
        worst = worst.max(rel_err(report.total, naive_loss(&p, &batch, lambda, d_max), 1.0));
        assert!((report.total - report.cross_entropy_term - report.regularization_term).abs() < 1e-9);
        assert_eq!(report.instances_seen, m);
    }
    worst
}

#[derive(Debug, Default)]
pub struct BaselineSweep {
    pub queries: usize,
    pub max_score_error: f64,
    /// `(system, query)` pairs whose ranking disagrees with the reference.
    pub order_failures: Vec<String>,
}

/// Every single-term and two-term query over the collection's terms.
fn all_queries(vocab: usize) -> Vec<Vec<u32>> {
    let terms: Vec<u32> = (2..2 + vocab as u32).collect();
    let mut out: Vec<Vec<u32>> = terms.iter().map(|&t| vec![t]).collect();
    for &a in &terms {
        for &b in &terms {
            out.push(vec![a, b]);
        }
    }
    out
}

/// Compares Model 1, Model 2 (both smoothings) and TF-IDF against the naive
/// evaluators on random tiny collections.
pub fn baseline_sweep(seed: u64, collections: usize) -> BaselineSweep {
    let mut r = rng(seed);
    let mut out = BaselineSweep::default();
    let order = |name: &str, q: &[u32], ranking: sert::ranking::Ranking, naive: &[f64], out: &mut BaselineSweep| {
        let got: Vec<usize> = ranking.candidates().collect();
        if !order_consistent(&got, naive, 1e-9) {
            out.order_failures.push(format!("{name} {q:?}"));
        }
    };
    for _ in 0..collections {
        let toy = random_collection(&mut r, 5, 3, 12);
        let corpus = toy.corpus();
        let stats = CollectionStatistics::new(&corpus, AssociationWeighting::Uniform);
        let beta = toy.avg_doc_len();
        for q in all_queries(toy.vocab) {
            let ids = toy.encode(&corpus, &q);
            if ids.is_empty() {
                assert!(model1_scores(&stats, &ids, Smoothing::jelinek_mercer()).is_err());
                continue;
            }
            for (smoothing, jm) in [
                (Smoothing::jelinek_mercer(), Some(0.5)),
                (Smoothing::dirichlet_for(&stats), None),
            ] {
                let n1 = toy.model1(&q, jm, beta);
                out.max_score_error = out
                    .max_score_error
                    .max(max_rel_err(&model1_scores(&stats, &ids, smoothing).unwrap(), &n1, 1.0));
                order("model1", &q, model1_rank(&stats, "q", &ids, smoothing).unwrap(), &n1, &mut out);

                let n2 = toy.model2(&q, jm, beta);
                for (a, b) in model2_scores(&stats, &ids, smoothing).unwrap().iter().zip(&n2) {
                    if a != b {
                        out.max_score_error = out.max_score_error.max(rel_err(*a, *b, 1.0));
                    }
                }
                order("model2", &q, model2_rank(&stats, "q", &ids, smoothing).unwrap(), &n2, &mut out);
            }
            let nt = toy.tfidf(&q);
            out.max_score_error = out.max_score_error.max(max_rel_err(&tfidf_scores(&stats, &ids).unwrap(), &nt, 1.0));
            order("tfidf", &q, tfidf_rank(&stats, "q", &ids).unwrap(), &nt, &mut out);
            out.queries += 1;
        }
    }
    out
}
