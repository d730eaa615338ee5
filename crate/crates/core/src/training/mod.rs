//! Parameter estimation: initialization, the batch loss and its gradient,
//! adadelta/SGD updates and the training loop.

mod config;
mod init;
mod loss;
mod optimizer;
mod trainer;

pub use config::{OptimizerKind, TrainingConfig};
pub use init::{apply_pretrained, glorot_limit, initialize, load_pretrained};
pub use loss::{batch_gradients, batch_loss, length_weight, BatchGradients, LossReport};
pub use optimizer::{adadelta_coordinate, adadelta_step, sgd_step, OptimizerState};
pub use trainer::{train, train_with, BatchLog};
