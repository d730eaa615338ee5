use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::Vocabulary;
use crate::error::{Error, Result};
use crate::model::Parameters;
use crate::scalar::Scalar;

/// Half-width of the uniform initialization range for a `rows × cols` matrix.
pub fn glorot_limit(rows: usize, cols: usize) -> f64 {
    (6.0 / (rows + cols) as f64).sqrt()
}

/// Uniform Glorot initialization of both matrices, zero bias.
///
/// The projection is drawn first, in row-major `e × |V|` order, then the
/// candidate matrix.
pub fn initialize<T: Scalar>(vocab_size: usize, n_candidates: usize, dim: usize, seed: u64) -> Result<Parameters<T>> {
    if vocab_size == 0 || n_candidates == 0 || dim == 0 {
        return Err(Error::InvalidArgument("model sizes must be ≥ 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let wv = glorot_limit(dim, vocab_size);
    let projection: Vec<T> = (0..dim * vocab_size)
        .map(|_| T::of_f64(rng.gen_range(-wv..=wv)))
        .collect();
    let wc = glorot_limit(n_candidates, dim);
    let candidates: Vec<T> = (0..n_candidates * dim)
        .map(|_| T::of_f64(rng.gen_range(-wc..=wc)))
        .collect();
    Parameters::from_parts(
        dim,
        vocab_size,
        n_candidates,
        &projection,
        candidates,
        vec![T::zero(); n_candidates],
    )
}

/// Overwrites embeddings of vocabulary words found in a text embedding file
/// (`<token> <v1> ... <ve>` per line, optional `<count> <dim>` header).
///
/// Returns the number of words overwritten.
pub fn load_pretrained<T: Scalar>(params: &mut Parameters<T>, vocabulary: &Vocabulary, path: &Path) -> Result<usize> {
    let f = File::open(path).map_err(|e| Error::io(path, e))?;
    apply_pretrained(params, vocabulary, BufReader::new(f), &path.display().to_string())
}

pub fn apply_pretrained<T: Scalar, R: BufRead>(
    params: &mut Parameters<T>,
    vocabulary: &Vocabulary,
    reader: R,
    source: &str,
) -> Result<usize> {
    let dim = params.dim();
    let mut replaced = 0;
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(source, e))?;
        let mut fields = line.split_whitespace();
        let Some(token) = fields.next() else { continue };
        let values: Vec<&str> = fields.collect();
        if i == 0 && values.len() == 1 && token.parse::<u64>().is_ok() && values[0].parse::<u64>().is_ok() {
            continue;
        }
        if values.len() != dim {
            return Err(Error::EmbeddingDimension {
                expected: dim,
                found: values.len(),
            });
        }
        let Some(id) = vocabulary.id(token) else { continue };
        let mut vec = Vec::with_capacity(dim);
        for v in values {
            let x: f64 = v
                .parse()
                .map_err(|_| Error::parse(source, i + 1, format!("bad value {v:?}")))?;
            vec.push(T::of_f64(x));
        }
        params.word_embedding_mut(id as usize).copy_from_slice(&vec);
        replaced += 1;
    }
    Ok(replaced)
}
