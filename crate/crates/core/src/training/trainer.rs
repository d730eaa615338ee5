use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::model::LogLinearModel;
use crate::scalar::Scalar;
use crate::training::config::{OptimizerKind, TrainingConfig};
use crate::training::init::{initialize, load_pretrained};
use crate::training::loss::batch_gradients;
use crate::training::optimizer::{adadelta_step, sgd_step, OptimizerState};

/// One line of the training log.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BatchLog {
    pub batch: usize,
    pub loss: f64,
    pub ce: f64,
    pub reg: f64,
}

pub fn train<T: Scalar>(corpus: &Corpus, config: &TrainingConfig) -> Result<(LogLinearModel<T>, Vec<BatchLog>)> {
    let mut log = Vec::new();
    let model = train_with(corpus, config, |entry| log.push(*entry))?;
    Ok((model, log))
}

/// Trains a model, reporting each batch's loss (measured before its update)
/// to `on_batch`.
pub fn train_with<T: Scalar, F: FnMut(&BatchLog)>(
    corpus: &Corpus,
    config: &TrainingConfig,
    mut on_batch: F,
) -> Result<LogLinearModel<T>> {
    config.validate()?;
    let mut instances = corpus.training_instances(config.window, config.overlapping)?;
    if instances.is_empty() || corpus.registry.is_empty() {
        return Err(Error::NoTrainingInstances);
    }
    let d_max = corpus.max_training_length();

    let mut params = initialize::<T>(corpus.vocabulary.len(), corpus.registry.len(), config.dim, config.seed)?;
    if let Some(path) = &config.init_embeddings {
        load_pretrained(&mut params, &corpus.vocabulary, path)?;
    }
    let mut state = OptimizerState::new(&params);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(1);

    let mut batch_no = 0;
    for _ in 0..config.epochs {
        instances.shuffle(&mut rng);
        for batch in instances.chunks(config.batch_size) {
            let grads = batch_gradients(&params, batch, config.weight_decay, d_max)?;
            match config.optimizer {
                OptimizerKind::Adadelta { rho, eps } => adadelta_step(&mut params, &grads, &mut state, rho, eps),
                OptimizerKind::Sgd { learning_rate } => sgd_step(&mut params, &grads, learning_rate),
            }
            if !params.is_finite() {
                return Err(Error::NonFinite(format!("parameters after batch {batch_no}")));
            }
            on_batch(&BatchLog {
                batch: batch_no,
                loss: grads.loss.total,
                ce: grads.loss.cross_entropy_term,
                reg: grads.loss.regularization_term,
            });
            batch_no += 1;
        }
    }
    LogLinearModel::new(params, corpus.vocabulary.clone(), corpus.registry.clone())
}
