//! Wall-clock scaling measurements for inference.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::baselines::{model1_scores, model2_scores, CollectionStatistics, Smoothing};
use crate::corpus::{generate_synthetic_corpus, Corpus, SynthConfig, Tokenizer, RESERVED};
use crate::error::Result;
use crate::model::Parameters;
use crate::scalar::Scalar;
use crate::training::initialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Ordinary least squares `y = slope · x + intercept`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> LinearFit {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let r_squared = if sxx > 0.0 && syy > 0.0 {
        sxy * sxy / (sxx * syy)
    } else {
        0.0
    };
    LinearFit {
        slope,
        intercept,
        r_squared,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingPoint {
    pub size: usize,
    /// Median seconds to answer the whole query batch.
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingReport {
    pub system: String,
    pub points: Vec<ScalingPoint>,
    pub fit: LinearFit,
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub dim: usize,
    pub vocab_size: usize,
    pub queries: usize,
    pub query_len: usize,
    pub repeats: usize,
    pub seed: u64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            dim: 300,
            vocab_size: 5000,
            queries: 200,
            query_len: 4,
            repeats: 5,
            seed: 7,
        }
    }
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    v[v.len() / 2]
}

fn time_median<F: FnMut()>(repeats: usize, mut f: F) -> f64 {
    f();
    median(
        (0..repeats.max(1))
            .map(|_| {
                let start = Instant::now();
                f();
                start.elapsed().as_secs_f64()
            })
            .collect(),
    )
}

fn finish(system: &str, points: Vec<ScalingPoint>) -> ScalingReport {
    let xs: Vec<f64> = points.iter().map(|p| p.size as f64).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.seconds).collect();
    ScalingReport {
        system: system.to_string(),
        fit: linear_fit(&xs, &ys),
        points,
    }
}

/// Times log-linear inference over a grid of candidate counts at fixed `e`
/// and `|V|`.
pub fn loglinear_scaling<T: Scalar>(grid: &[usize], config: &BenchConfig) -> Result<ScalingReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let queries: Vec<Vec<usize>> = (0..config.queries)
        .map(|_| {
            (0..config.query_len)
                .map(|_| rng.gen_range(RESERVED..config.vocab_size.max(RESERVED + 1)))
                .collect()
        })
        .collect();
    let mut points = Vec::new();
    for &n_candidates in grid {
        let params: Parameters<T> = initialize(config.vocab_size.max(RESERVED + 1), n_candidates, config.dim, config.seed)?;
        let seconds = time_median(config.repeats, || {
            for q in &queries {
                std::hint::black_box(params.sequence_distribution(q).expect("valid ids"));
            }
        });
        points.push(ScalingPoint {
            size: n_candidates,
            seconds,
        });
    }
    Ok(finish("loglinear", points))
}

fn synthetic_stats(n_candidates: usize, docs_per_candidate: usize, seed: u64) -> Result<(Corpus, CollectionStatistics)> {
    let mut cfg = SynthConfig::new(n_candidates, docs_per_candidate, 20, 0.3, seed);
    cfg.doc_len = 40;
    let synth = generate_synthetic_corpus(&cfg)?;
    let corpus = Corpus::index(&synth.documents, &Tokenizer::default(), usize::MAX)?;
    let stats = CollectionStatistics::new(&corpus, Default::default());
    Ok((corpus, stats))
}

fn baseline_queries(corpus: &Corpus, config: &BenchConfig) -> Vec<Vec<u32>> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let v = corpus.vocabulary.len() as u32;
    (0..config.queries)
        .map(|_| (0..config.query_len).map(|_| rng.gen_range(RESERVED as u32..v)).collect())
        .collect()
}

/// Times profile-centric Model 1 as the number of candidates grows.
pub fn model1_scaling(grid: &[usize], docs_per_candidate: usize, config: &BenchConfig) -> Result<ScalingReport> {
    let mut points = Vec::new();
    for &n in grid {
        let (corpus, stats) = synthetic_stats(n, docs_per_candidate, config.seed)?;
        let queries = baseline_queries(&corpus, config);
        let seconds = time_median(config.repeats, || {
            for q in &queries {
                std::hint::black_box(model1_scores(&stats, q, Smoothing::jelinek_mercer()).ok());
            }
        });
        points.push(ScalingPoint { size: n, seconds });
    }
    Ok(finish("model1-jm", points))
}

/// Times document-centric Model 2 as the number of documents grows at a
/// fixed candidate count.
pub fn model2_scaling(n_candidates: usize, docs_grid: &[usize], config: &BenchConfig) -> Result<ScalingReport> {
    let mut points = Vec::new();
    for &docs in docs_grid {
        let (corpus, stats) = synthetic_stats(n_candidates, docs, config.seed)?;
        let queries = baseline_queries(&corpus, config);
        let seconds = time_median(config.repeats, || {
            for q in &queries {
                std::hint::black_box(model2_scores(&stats, q, Smoothing::jelinek_mercer()).ok());
            }
        });
        points.push(ScalingPoint {
            size: stats.n_documents(),
            seconds,
        });
    }
    Ok(finish("model2-jm", points))
}
