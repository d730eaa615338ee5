use std::path::PathBuf;

use crate::error::{Error, Result};

/// Update rule applied after every batch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OptimizerKind {
    Adadelta { rho: f64, eps: f64 },
    /// Fixed global learning rate.
    Sgd { learning_rate: f64 },
}

impl Default for OptimizerKind {
    fn default() -> Self {
        OptimizerKind::Adadelta { rho: 0.95, eps: 1e-6 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainingConfig {
    /// n-gram width.
    pub window: usize,
    pub batch_size: usize,
    pub weight_decay: f64,
    pub optimizer: OptimizerKind,
    pub epochs: usize,
    pub overlapping: bool,
    pub seed: u64,
    /// Embedding dimensionality `e`.
    pub dim: usize,
    /// Optional warm start for the word projection.
    pub init_embeddings: Option<PathBuf>,
}

impl Default for TrainingConfig {
    fn default() -> Self {
        TrainingConfig {
            window: 8,
            batch_size: 1024,
            weight_decay: 0.01,
            optimizer: OptimizerKind::default(),
            epochs: 1,
            overlapping: true,
            seed: 42,
            dim: 300,
            init_embeddings: None,
        }
    }
}

impl TrainingConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidArgument(m.to_string()));
        if self.window == 0 {
            return bad("window must be ≥ 1");
        }
        if self.batch_size == 0 {
            return bad("batch size must be ≥ 1");
        }
        if self.dim == 0 {
            return bad("embedding size must be ≥ 1");
        }
        if !(self.weight_decay >= 0.0) {
            return bad("weight decay must be ≥ 0");
        }
        match self.optimizer {
            OptimizerKind::Adadelta { rho, eps } => {
                if !(rho > 0.0 && rho < 1.0) {
                    return bad("adadelta rho must lie in (0, 1)");
                }
                if !(eps > 0.0) {
                    return bad("adadelta epsilon must be > 0");
                }
            }
            OptimizerKind::Sgd { learning_rate } => {
                if !(learning_rate > 0.0) {
                    return bad("learning rate must be > 0");
                }
            }
        }
        Ok(())
    }
}
