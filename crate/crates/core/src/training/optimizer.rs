use crate::model::Parameters;
use crate::scalar::Scalar;
use crate::training::loss::BatchGradients;

/// Running averages of squared gradients and squared updates for each
/// parameter block.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerState<T> {
    pub word_grad_sq: Vec<T>,
    pub word_update_sq: Vec<T>,
    pub candidate_grad_sq: Vec<T>,
    pub candidate_update_sq: Vec<T>,
    pub bias_grad_sq: Vec<T>,
    pub bias_update_sq: Vec<T>,
}

impl<T: Scalar> OptimizerState<T> {
    pub fn new(params: &Parameters<T>) -> Self {
        let z = |n: usize| vec![T::zero(); n];
        OptimizerState {
            word_grad_sq: z(params.word_embeddings().len()),
            word_update_sq: z(params.word_embeddings().len()),
            candidate_grad_sq: z(params.candidate_matrix().len()),
            candidate_update_sq: z(params.candidate_matrix().len()),
            bias_grad_sq: z(params.bias().len()),
            bias_update_sq: z(params.bias().len()),
        }
    }
}

/// One adadelta update of a single coordinate.
///
/// ```text
/// E[g²]  ← ρ E[g²] + (1−ρ) g²
/// Δ      = −√(E[Δ²]+ε) / √(E[g²]+ε) · g
/// E[Δ²]  ← ρ E[Δ²] + (1−ρ) Δ²
/// θ      ← θ + Δ
/// ```
#[inline]
pub fn adadelta_coordinate<T: Scalar>(theta: &mut T, g: T, grad_sq: &mut T, update_sq: &mut T, rho: T, eps: T) {
    let one = T::one();
    *grad_sq = rho * *grad_sq + (one - rho) * g * g;
    let delta = -((*update_sq + eps).sqrt() / (*grad_sq + eps).sqrt()) * g;
    *update_sq = rho * *update_sq + (one - rho) * delta * delta;
    *theta += delta;
}

fn adadelta_block<T: Scalar>(theta: &mut [T], grads: &[T], grad_sq: &mut [T], update_sq: &mut [T], rho: T, eps: T) {
    for (((t, &g), gs), us) in theta.iter_mut().zip(grads).zip(grad_sq).zip(update_sq) {
        adadelta_coordinate(t, g, gs, us, rho, eps);
    }
}

/// Applies adadelta to every parameter, including embeddings whose only
/// gradient is weight decay.
pub fn adadelta_step<T: Scalar>(
    params: &mut Parameters<T>,
    grads: &BatchGradients<T>,
    state: &mut OptimizerState<T>,
    rho: f64,
    eps: f64,
) {
    let (rho, eps) = (T::of_f64(rho), T::of_f64(eps));
    let e = params.dim();
    let decay = grads.word_decay;
    let zeros = vec![T::zero(); e];
    for w in 0..params.vocab_size() {
        let ce = grads.word.get(&w).map_or(&zeros[..], Vec::as_slice);
        let range = w * e..(w + 1) * e;
        let theta = &mut params.word_embeddings[range.clone()];
        let gs = &mut state.word_grad_sq[range.clone()];
        let us = &mut state.word_update_sq[range];
        for d in 0..e {
            let g = ce[d] + decay * theta[d];
            adadelta_coordinate(&mut theta[d], g, &mut gs[d], &mut us[d], rho, eps);
        }
    }
    adadelta_block(
        &mut params.candidate_matrix,
        &grads.candidate,
        &mut state.candidate_grad_sq,
        &mut state.candidate_update_sq,
        rho,
        eps,
    );
    adadelta_block(
        &mut params.bias,
        &grads.bias,
        &mut state.bias_grad_sq,
        &mut state.bias_update_sq,
        rho,
        eps,
    );
}

/// Plain gradient descent with a global learning rate.
pub fn sgd_step<T: Scalar>(params: &mut Parameters<T>, grads: &BatchGradients<T>, learning_rate: f64) {
    let lr = T::of_f64(learning_rate);
    let e = params.dim();
    let decay = grads.word_decay;
    if decay != T::zero() {
        for v in params.word_embeddings.iter_mut() {
            *v -= lr * decay * *v;
        }
    }
    for (&w, g) in &grads.word {
        for (t, &g) in params.word_embeddings[w * e..(w + 1) * e].iter_mut().zip(g) {
            *t -= lr * g;
        }
    }
    for (t, &g) in params.candidate_matrix.iter_mut().zip(&grads.candidate) {
        *t -= lr * g;
    }
    for (t, &g) in params.bias.iter_mut().zip(&grads.bias) {
        *t -= lr * g;
    }
}
