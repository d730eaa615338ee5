//! Unsupervised expertise retrieval with a log-linear model over word and
//! candidate embeddings.
//!
//! The crate covers the whole pipeline: corpus ingestion and vocabulary
//! pruning ([`corpus`]), the model and its inference ([`model`]), training
//! with analytic gradients and adadelta ([`training`]), generative and
//! vector-space baselines plus rank fusion ([`baselines`]), and trec-style
//! evaluation with significance testing ([`eval`]).
//!
//! Numeric code is generic over [`Scalar`]; the aliases below fix the
//! precision. Training and serving default to `f32`, gradient checks use `f64`.

pub mod baselines;
pub mod bench;
pub mod corpus;
mod error;
pub mod eval;
pub mod model;
pub mod query;
pub mod ranking;
pub mod scalar;
pub mod training;

pub use error::{Error, ErrorClass, Result};
pub use scalar::Scalar;

/// Single-precision model (the default for training and serving).
pub type Model = model::LogLinearModel<f32>;
/// Double-precision model.
pub type Model64 = model::LogLinearModel<f64>;
pub type Params = model::Parameters<f32>;
pub type Params64 = model::Parameters<f64>;
pub type Gradients = training::BatchGradients<f32>;
pub type Gradients64 = training::BatchGradients<f64>;
