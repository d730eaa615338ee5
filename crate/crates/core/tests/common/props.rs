//! Property bodies shared by the proptest suite and the acceptance gate.

use std::collections::HashMap;

use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use sert::baselines::ensemble_rank;
use sert::corpus::{extract_ngrams, CandidateRegistry, Document, Vocabulary, RESERVED};
use sert::eval::benjamini_hochberg;
use sert::model::{LogLinearModel, Parameters};
use sert::ranking::Ranking;
use sert::Params64;

pub const CASES: u32 = 256;

pub fn runner(seed: u64) -> TestRunner {
    let mut config = Config::with_cases(CASES);
    config.failure_persistence = None;
    TestRunner::new_with_rng(config, proptest::test_runner::TestRng::from_seed(
        proptest::test_runner::RngAlgorithm::ChaCha,
        &{
            let mut s = [0u8; 32];
            s[..8].copy_from_slice(&seed.to_le_bytes());
            s
        },
    ))
}

/// Small random parameters together with a word sequence over them.
pub fn params_and_words() -> impl Strategy<Value = (Params64, Vec<usize>)> {
    (1usize..=10, 1usize..=6, 1usize..=4).prop_flat_map(|(v, c, e)| {
        (
            prop::collection::vec(-4.0f64..4.0, e * v),
            prop::collection::vec(-4.0f64..4.0, c * e),
            prop::collection::vec(-4.0f64..4.0, c),
            prop::collection::vec(0..v, 1..=8),
        )
            .prop_map(move |(proj, wc, b, words)| (Parameters::from_parts(e, v, c, &proj, wc, b).unwrap(), words))
    })
}

pub fn softmax_normalized((p, words): (Params64, Vec<usize>)) -> Result<(), TestCaseError> {
    for &w in &words {
        let s: f64 = p.word_distribution(w).unwrap().probs().iter().sum();
        prop_assert!((s - 1.0).abs() < 1e-9, "f64 sum {}", s);
        let probs = p.cast::<f32>().word_distribution(w).unwrap().probs().to_vec();
        let s32: f32 = probs.iter().sum();
        // log p = logit - lse loses eps * |logit| before exp
        let scale = (0..p.n_candidates())
            .map(|c| {
                let dot: f64 = p.candidate_row(c).iter().zip(p.word_embedding(w)).map(|(a, b)| a * b).sum();
                (dot + p.bias()[c]).abs()
            })
            .fold(1.0, f64::max) as f32;
        let tol = 4.0 * (probs.len() as f32 + scale) * f32::EPSILON;
        prop_assert!((s32 - 1.0).abs() <= tol, "f32 sum {:e}", s32 - 1.0);
    }
    let s: f64 = p.sequence_distribution(&words).unwrap().probs().iter().sum();
    prop_assert!((s - 1.0).abs() < 1e-9);
    Ok(())
}

pub fn permutation_invariant((p, words): (Params64, Vec<usize>)) -> Result<(), TestCaseError> {
    let a = p.sequence_distribution(&words).unwrap();
    let mut rev = words.clone();
    rev.reverse();
    let mut rot = words.clone();
    rot.rotate_left(words.len() / 2);
    prop_assert_eq!(&a, &p.sequence_distribution(&rev).unwrap());
    prop_assert_eq!(&a, &p.sequence_distribution(&rot).unwrap());
    prop_assert_eq!(p.sequence_distribution(&words[..1]).unwrap(), p.word_distribution(words[0]).unwrap());
    Ok(())
}

pub fn argsort_ignores_normalizer((p, words): (Params64, Vec<usize>)) -> Result<(), TestCaseError> {
    let raw = p.unnormalized_log_scores(&words).unwrap();
    let norm = p.sequence_distribution(&words).unwrap().log_probs;
    let a = Ranking::from_scores("q", &raw);
    let b = Ranking::from_scores("q", &norm);
    // normalization subtracts one constant; rounding may only reorder near-ties
    for (x, y) in a.candidates().zip(b.candidates()) {
        if x != y {
            prop_assert!((raw[x] - raw[y]).abs() < 1e-9 * raw[x].abs().max(1.0));
        }
    }
    Ok(())
}

pub fn p_values() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(prop_oneof![0.0f64..=1.0, Just(0.0), Just(1.0), Just(0.05)], 1..40)
}

pub fn bh_monotone(mut raw: Vec<f64>) -> Result<(), TestCaseError> {
    let adj = benjamini_hochberg(&raw);
    for (a, r) in adj.iter().zip(&raw) {
        prop_assert!(*a >= *r - 1e-15 && *a <= 1.0);
    }
    raw.sort_by(f64::total_cmp);
    let adj = benjamini_hochberg(&raw);
    prop_assert!(adj.windows(2).all(|w| w[0] <= w[1]), "{:?}", adj);
    Ok(())
}

/// A random model with a matching vocabulary and registry.
pub fn models() -> impl Strategy<Value = LogLinearModel<f32>> {
    (
        prop::collection::btree_set("[a-zα-ω]{1,6}", 1..8),
        prop::collection::btree_set("[A-Za-z0-9_.@-]{1,8}", 1..5),
        1usize..=4,
        any::<u64>(),
    )
        .prop_map(|(tokens, names, e, seed)| {
            let counts: HashMap<String, u64> = tokens.into_iter().enumerate().map(|(i, t)| (t, i as u64 + 1)).collect();
            let vocabulary = Vocabulary::from_counts(counts, 3, usize::MAX).unwrap();
            let registry = CandidateRegistry::from_names(names);
            let mut params: Parameters<f32> =
                sert::training::initialize(vocabulary.len(), registry.len(), e, seed).unwrap();
            // exercise awkward bit patterns
            params.bias_mut()[0] = f32::MIN_POSITIVE;
            params.word_embeddings_mut()[0] = -0.0;
            LogLinearModel::new(params, vocabulary, registry).unwrap()
        })
}

pub fn model_round_trip(model: LogLinearModel<f32>) -> Result<(), TestCaseError> {
    let bytes = model.to_bytes();
    let back = LogLinearModel::<f32>::from_bytes(&bytes).unwrap();
    let bits = |v: &[f32]| v.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
    prop_assert_eq!(bits(back.params.word_embeddings()), bits(model.params.word_embeddings()));
    prop_assert_eq!(bits(back.params.candidate_matrix()), bits(model.params.candidate_matrix()));
    prop_assert_eq!(bits(back.params.bias()), bits(model.params.bias()));
    prop_assert_eq!(&back.vocabulary, &model.vocabulary);
    prop_assert_eq!(&back.registry, &model.registry);
    prop_assert_eq!(back.to_bytes(), bytes);
    Ok(())
}

pub fn documents() -> impl Strategy<Value = (Document, usize)> {
    (
        prop::collection::vec(RESERVED as u32..50, 1..40),
        prop::collection::btree_set(0usize..5, 1..4),
        1usize..10,
    )
        .prop_map(|(tokens, assoc, n)| {
            (
                Document {
                    doc_id: "d".into(),
                    tokens,
                    associations: assoc.into_iter().collect(),
                },
                n,
            )
        })
}

pub fn ngrams_reassemble((doc, n): (Document, usize)) -> Result<(), TestCaseError> {
    let windows = extract_ngrams(0, &doc, n, false).unwrap();
    prop_assert_eq!(windows.len(), doc.tokens.len().div_ceil(n));
    let mut flat: Vec<u32> = windows.iter().flat_map(|w| w.word_ids.iter().copied()).collect();
    while flat.last() == Some(&Vocabulary::PAD) {
        flat.pop();
    }
    prop_assert_eq!(&flat, &doc.tokens);
    let overlapping = extract_ngrams(0, &doc, n, true).unwrap();
    prop_assert_eq!(overlapping.len(), doc.tokens.len());
    for w in windows.iter().chain(&overlapping) {
        prop_assert_eq!(w.word_ids.len(), n);
        let s: f64 = w.target.iter().map(|t| t.1).sum();
        prop_assert!((s - 1.0).abs() < 1e-9);
    }
    Ok(())
}

pub fn rankings() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (1usize..12).prop_flat_map(|n| {
        (
            prop::collection::vec(prop_oneof![-5.0f64..5.0, Just(0.0)], n),
            prop::collection::vec(prop_oneof![-5.0f64..5.0, Just(1.0)], n),
        )
    })
}

pub fn ensemble_symmetric((a, b): (Vec<f64>, Vec<f64>)) -> Result<(), TestCaseError> {
    let ra = Ranking::from_scores("q", &a);
    let rb = Ranking::from_scores("q", &b);
    prop_assert_eq!(ensemble_rank(&ra, &rb).unwrap(), ensemble_rank(&rb, &ra).unwrap());
    Ok(())
}
