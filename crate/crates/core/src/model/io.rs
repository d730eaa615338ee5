//! Binary model file.
//!
//! Layout (all integers little-endian):
//!
//! ```text
//! "SERTMODL" | version u32 | e u64 | |V| u64 | |C| u64
//! W_v  e×|V| f32 row-major
//! W_c  |C|×e f32 row-major
//! b    |C|   f32
//! vocabulary: count u64, then per entry: len u32, utf-8 bytes, frequency u64
//! registry:   count u64, then per entry: len u32, utf-8 bytes
//! crc32 u32 of every preceding byte
//! ```

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use crate::corpus::{CandidateRegistry, Vocabulary};
use crate::error::{Error, Result};
use crate::model::{LogLinearModel, Parameters};
use crate::scalar::Scalar;

pub const MAGIC: &[u8; 8] = b"SERTMODL";
pub const FORMAT_VERSION: u32 = 1;

struct Header {
    dim: u64,
    vocab_size: u64,
    n_candidates: u64,
}

fn encode(
    header: &Header,
    projection: &[f32],
    candidates: &[f32],
    bias: &[f32],
    vocabulary: &Vocabulary,
    registry: &CandidateRegistry,
) -> Vec<u8> {
    let mut out = Vec::with_capacity(
        64 + 4 * (projection.len() + candidates.len() + bias.len()) + 16 * vocabulary.len(),
    );
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    for v in [header.dim, header.vocab_size, header.n_candidates] {
        out.extend_from_slice(&v.to_le_bytes());
    }
    for arr in [projection, candidates, bias] {
        for v in arr {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    out.extend_from_slice(&(vocabulary.len() as u64).to_le_bytes());
    for (id, tok) in vocabulary.tokens().iter().enumerate() {
        put_str(&mut out, tok);
        out.extend_from_slice(&vocabulary.frequency(id as u32).to_le_bytes());
    }
    out.extend_from_slice(&(registry.len() as u64).to_le_bytes());
    for name in registry.names() {
        put_str(&mut out, name);
    }
    let crc = crc32fast::hash(&out);
    out.extend_from_slice(&crc.to_le_bytes());
    out
}

fn put_str(out: &mut Vec<u8>, s: &str) {
    out.extend_from_slice(&(s.len() as u32).to_le_bytes());
    out.extend_from_slice(s.as_bytes());
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(n).ok_or(Error::Truncated)?;
        let s = self.buf.get(self.pos..end).ok_or(Error::Truncated)?;
        self.pos = end;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn f32s(&mut self, n: u64) -> Result<Vec<f32>> {
        let bytes = usize::try_from(n)
            .ok()
            .and_then(|n| n.checked_mul(4))
            .ok_or(Error::Truncated)?;
        Ok(self
            .take(bytes)?
            .chunks_exact(4)
            .map(|c| f32::from_le_bytes(c.try_into().unwrap()))
            .collect())
    }

    fn string(&mut self) -> Result<String> {
        let len = self.u32()? as usize;
        String::from_utf8(self.take(len)?.to_vec())
            .map_err(|_| Error::ShapeMismatch("table entry is not valid utf-8".into()))
    }

    fn remaining(&self) -> usize {
        self.buf.len() - self.pos
    }
}

fn decode<T: Scalar>(bytes: &[u8]) -> Result<LogLinearModel<T>> {
    let mut r = Reader { buf: bytes, pos: 0 };
    if r.take(MAGIC.len()).map_err(|_| Error::BadMagic)? != MAGIC {
        return Err(Error::BadMagic);
    }
    let version = r.u32()?;
    if version != FORMAT_VERSION {
        return Err(Error::UnsupportedVersion(version));
    }
    let header = Header {
        dim: r.u64()?,
        vocab_size: r.u64()?,
        n_candidates: r.u64()?,
    };
    let projection = r.f32s(header.dim.checked_mul(header.vocab_size).ok_or(Error::Truncated)?)?;
    let candidates = r.f32s(header.n_candidates.checked_mul(header.dim).ok_or(Error::Truncated)?)?;
    let bias = r.f32s(header.n_candidates)?;

    let vocab_count = r.u64()?;
    if vocab_count != header.vocab_size {
        return Err(Error::ShapeMismatch(format!(
            "header declares |V|={}, vocabulary table has {vocab_count}",
            header.vocab_size
        )));
    }
    let mut counts = HashMap::new();
    let mut tokens = Vec::new();
    for _ in 0..vocab_count {
        let tok = r.string()?;
        let freq = r.u64()?;
        tokens.push(tok.clone());
        counts.insert(tok, freq);
    }
    let reg_count = r.u64()?;
    if reg_count != header.n_candidates {
        return Err(Error::ShapeMismatch(format!(
            "header declares |C|={}, registry table has {reg_count}",
            header.n_candidates
        )));
    }
    let mut names = Vec::new();
    for _ in 0..reg_count {
        names.push(r.string()?);
    }
    let body_len = r.pos;
    let stored = r.u32()?;
    if r.remaining() != 0 {
        return Err(Error::ShapeMismatch(format!("{} trailing bytes", r.remaining())));
    }
    let computed = crc32fast::hash(&bytes[..body_len]);
    if stored != computed {
        return Err(Error::Checksum { stored, computed });
    }

    let vocabulary = rebuild_vocabulary(&tokens, counts)?;
    let registry = CandidateRegistry::from_names(names);
    if registry.len() as u64 != header.n_candidates {
        return Err(Error::ShapeMismatch("duplicate candidate names".into()));
    }
    let conv = |v: Vec<f32>| v.into_iter().map(T::of_f32).collect::<Vec<T>>();
    let params = Parameters::from_parts(
        header.dim as usize,
        header.vocab_size as usize,
        header.n_candidates as usize,
        &conv(projection),
        conv(candidates),
        conv(bias),
    )?;
    LogLinearModel::new(params, vocabulary, registry)
}

fn rebuild_vocabulary(tokens: &[String], counts: HashMap<String, u64>) -> Result<Vocabulary> {
    let mut tsv = Vec::new();
    for (id, tok) in tokens.iter().enumerate() {
        tsv.extend_from_slice(format!("{tok}\t{id}\t{}\n", counts[tok]).as_bytes());
    }
    Vocabulary::read_tsv(&tsv[..], "model vocabulary")
        .map_err(|e| Error::ShapeMismatch(format!("vocabulary table: {e}")))
}

impl<T: Scalar> LogLinearModel<T> {
    /// Serializes to the binary model format (weights narrowed to `f32`).
    pub fn to_bytes(&self) -> Vec<u8> {
        let p = &self.params;
        let narrow = |v: &[T]| v.iter().map(|x| x.as_f32()).collect::<Vec<f32>>();
        encode(
            &Header {
                dim: p.dim() as u64,
                vocab_size: p.vocab_size() as u64,
                n_candidates: p.n_candidates() as u64,
            },
            &narrow(&p.projection_row_major()),
            &narrow(p.candidate_matrix()),
            &narrow(p.bias()),
            &self.vocabulary,
            &self.registry,
        )
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        decode(bytes)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_bytes()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
        decode(&bytes)
    }
}
