use crate::error::{Error, Result};
use crate::scalar::{log_softmax_in_place, Scalar};

/// Trainable weights of the log-linear model.
///
/// The word projection is held transposed: row `i` of `word_embeddings` is
/// column `i` of the `e × |V|` projection, so each embedding is contiguous.
#[derive(Debug, Clone, PartialEq)]
pub struct Parameters<T> {
    pub(crate) dim: usize,
    pub(crate) vocab_size: usize,
    pub(crate) n_candidates: usize,
    pub(crate) word_embeddings: Vec<T>,
    pub(crate) candidate_matrix: Vec<T>,
    pub(crate) bias: Vec<T>,
}

/// Natural-log probabilities over candidates.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateDistribution<T> {
    pub log_probs: Vec<T>,
}

impl<T: Scalar> CandidateDistribution<T> {
    pub fn probs(&self) -> Vec<T> {
        self.log_probs.iter().map(|lp| lp.exp()).collect()
    }

    pub fn len(&self) -> usize {
        self.log_probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.log_probs.is_empty()
    }
}

impl<T: Scalar> Parameters<T> {
    /// All-zero parameters.
    pub fn zeros(vocab_size: usize, n_candidates: usize, dim: usize) -> Self {
        Parameters {
            dim,
            vocab_size,
            n_candidates,
            word_embeddings: vec![T::zero(); vocab_size * dim],
            candidate_matrix: vec![T::zero(); n_candidates * dim],
            bias: vec![T::zero(); n_candidates],
        }
    }

    /// Builds parameters from explicit arrays. `projection` is the `e × |V|`
    /// word projection in row-major order; `candidates` is `|C| × e`.
    pub fn from_parts(
        dim: usize,
        vocab_size: usize,
        n_candidates: usize,
        projection: &[T],
        candidates: Vec<T>,
        bias: Vec<T>,
    ) -> Result<Self> {
        if projection.len() != dim * vocab_size
            || candidates.len() != n_candidates * dim
            || bias.len() != n_candidates
        {
            return Err(Error::ShapeMismatch(format!(
                "arrays do not match e={dim}, |V|={vocab_size}, |C|={n_candidates}"
            )));
        }
        let mut word_embeddings = vec![T::zero(); vocab_size * dim];
        for k in 0..dim {
            for w in 0..vocab_size {
                word_embeddings[w * dim + k] = projection[k * vocab_size + w];
            }
        }
        Ok(Parameters {
            dim,
            vocab_size,
            n_candidates,
            word_embeddings,
            candidate_matrix: candidates,
            bias,
        })
    }

    /// The `e × |V|` projection in row-major order.
    pub fn projection_row_major(&self) -> Vec<T> {
        let mut out = vec![T::zero(); self.dim * self.vocab_size];
        for w in 0..self.vocab_size {
            for k in 0..self.dim {
                out[k * self.vocab_size + w] = self.word_embeddings[w * self.dim + k];
            }
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vocab_size(&self) -> usize {
        self.vocab_size
    }

    pub fn n_candidates(&self) -> usize {
        self.n_candidates
    }

    pub fn word_embedding(&self, word: usize) -> &[T] {
        &self.word_embeddings[word * self.dim..(word + 1) * self.dim]
    }

    pub fn word_embedding_mut(&mut self, word: usize) -> &mut [T] {
        &mut self.word_embeddings[word * self.dim..(word + 1) * self.dim]
    }

    pub fn candidate_row(&self, c: usize) -> &[T] {
        &self.candidate_matrix[c * self.dim..(c + 1) * self.dim]
    }

    pub fn word_embeddings(&self) -> &[T] {
        &self.word_embeddings
    }

    pub fn candidate_matrix(&self) -> &[T] {
        &self.candidate_matrix
    }

    pub fn bias(&self) -> &[T] {
        &self.bias
    }

    pub fn word_embeddings_mut(&mut self) -> &mut [T] {
        &mut self.word_embeddings
    }

    pub fn candidate_matrix_mut(&mut self) -> &mut [T] {
        &mut self.candidate_matrix
    }

    pub fn bias_mut(&mut self) -> &mut [T] {
        &mut self.bias
    }

    pub fn is_finite(&self) -> bool {
        self.word_embeddings
            .iter()
            .chain(&self.candidate_matrix)
            .chain(&self.bias)
            .all(|v| v.is_finite())
    }

    /// Converts to another precision.
    pub fn cast<U: Scalar>(&self) -> Parameters<U> {
        let conv = |v: &[T]| v.iter().map(|x| U::of_f64(x.as_f64())).collect();
        Parameters {
            dim: self.dim,
            vocab_size: self.vocab_size,
            n_candidates: self.n_candidates,
            word_embeddings: conv(&self.word_embeddings),
            candidate_matrix: conv(&self.candidate_matrix),
            bias: conv(&self.bias),
        }
    }

    fn check_word(&self, word: usize) -> Result<()> {
        if word >= self.vocab_size {
            return Err(Error::InvalidWordId {
                id: word,
                size: self.vocab_size,
            });
        }
        Ok(())
    }

    /// Unnormalized candidate logits `W_c · v_w + b` written into `out`.
    pub fn word_logits_into(&self, word: usize, out: &mut [T]) {
        let v = self.word_embedding(word);
        for (j, o) in out.iter_mut().enumerate() {
            let row = self.candidate_row(j);
            *o = row.iter().zip(v).map(|(&a, &b)| a * b).sum::<T>() + self.bias[j];
        }
    }

    /// Per-word log-softmax written into `out`.
    pub fn word_log_probs_into(&self, word: usize, out: &mut [T]) {
        self.word_logits_into(word, out);
        log_softmax_in_place(out);
    }

    /// Candidate distribution for a single word.
    pub fn word_distribution(&self, word: usize) -> Result<CandidateDistribution<T>> {
        self.check_word(word)?;
        let mut log_probs = vec![T::zero(); self.n_candidates];
        self.word_log_probs_into(word, &mut log_probs);
        Ok(CandidateDistribution { log_probs })
    }

    /// Sum of per-word log-probabilities before the final renormalization.
    ///
    /// Words are summed in ascending id order so the result does not depend on
    /// the order of `words`.
    pub fn unnormalized_log_scores(&self, words: &[usize]) -> Result<Vec<T>> {
        if words.is_empty() {
            return Err(Error::UnanswerableQuery);
        }
        for &w in words {
            self.check_word(w)?;
        }
        let mut sorted = words.to_vec();
        sorted.sort_unstable();
        let mut total = vec![T::zero(); self.n_candidates];
        let mut buf = vec![T::zero(); self.n_candidates];
        for &w in &sorted {
            self.word_log_probs_into(w, &mut buf);
            for (t, b) in total.iter_mut().zip(&buf) {
                *t += *b;
            }
        }
        Ok(total)
    }

    /// Bag-of-words candidate distribution, renormalized in log space.
    pub fn sequence_distribution(&self, words: &[usize]) -> Result<CandidateDistribution<T>> {
        if let [w] = words {
            return self.word_distribution(*w);
        }
        let mut log_probs = self.unnormalized_log_scores(words)?;
        log_softmax_in_place(&mut log_probs);
        Ok(CandidateDistribution { log_probs })
    }

    /// Vocabulary ids whose embeddings lie closest (Euclidean) to `word`'s,
    /// excluding `word` itself and reserved ids. Ties go to the smaller id.
    pub fn nearest_words(&self, word: usize, k: usize) -> Result<Vec<(usize, T)>> {
        self.check_word(word)?;
        let target = self.word_embedding(word);
        let mut dists: Vec<(usize, T)> = (crate::corpus::RESERVED..self.vocab_size)
            .filter(|&w| w != word)
            .map(|w| {
                let d = self
                    .word_embedding(w)
                    .iter()
                    .zip(target)
                    .map(|(&a, &b)| (a - b) * (a - b))
                    .sum::<T>()
                    .sqrt();
                (w, d)
            })
            .collect();
        dists.sort_by(|a, b| {
            a.1.partial_cmp(&b.1)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.0.cmp(&b.0))
        });
        dists.truncate(k);
        Ok(dists)
    }
}

/// Shannon entropy of `exp(log_probs)` divided by `ln |C|`, clamped to [0, 1].
pub fn normalized_entropy<T: Scalar>(log_probs: &[T]) -> Result<T> {
    if log_probs.len() < 2 {
        return Err(Error::InvalidArgument("normalized entropy needs |C| ≥ 2".into()));
    }
    let h: T = log_probs
        .iter()
        .map(|&lp| {
            let p = lp.exp();
            if p > T::zero() && lp.is_finite() {
                -p * lp
            } else {
                T::zero()
            }
        })
        .sum();
    let denom = T::of_f64((log_probs.len() as f64).ln());
    Ok((h / denom).max(T::zero()).min(T::one()))
}
