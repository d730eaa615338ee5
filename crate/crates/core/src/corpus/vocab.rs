use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::corpus::tokenize::{NUM_TOKEN, PAD_TOKEN};
use crate::error::{Error, Result};

/// Default number of retained non-reserved words (2^16).
pub const DEFAULT_VOCAB_SIZE: usize = 1 << 16;

/// Number of reserved entries at the start of every vocabulary.
pub const RESERVED: usize = 2;

pub type WordId = u32;

/// Pruned token/id mapping.
///
/// Ids `0` and `1` are always the padding and number-placeholder tokens. The
/// remaining ids are assigned in order of decreasing corpus frequency, ties
/// broken lexicographically.
#[derive(Debug, Clone)]
pub struct Vocabulary {
    token_to_id: HashMap<String, WordId>,
    id_to_token: Vec<String>,
    frequencies: Vec<u64>,
    size_limit: usize,
}

// The limit a vocabulary was built with is not recoverable from disk, so it
// does not take part in equality.
impl PartialEq for Vocabulary {
    fn eq(&self, other: &Self) -> bool {
        self.id_to_token == other.id_to_token && self.frequencies == other.frequencies
    }
}

impl Vocabulary {
    pub const PAD: WordId = 0;
    pub const NUM: WordId = 1;

    /// Builds a vocabulary from tokenized documents.
    pub fn build<'a, I, D>(documents: I, size_limit: usize) -> Result<Self>
    where
        I: IntoIterator<Item = D>,
        D: IntoIterator<Item = &'a String>,
    {
        let mut counts: HashMap<String, u64> = HashMap::new();
        let mut num_count = 0u64;
        let mut any_doc = false;
        for doc in documents {
            any_doc = true;
            for token in doc {
                if token == NUM_TOKEN {
                    num_count += 1;
                } else if token != PAD_TOKEN {
                    *counts.entry(token.clone()).or_default() += 1;
                }
            }
        }
        if !any_doc || (counts.is_empty() && num_count == 0) {
            return Err(Error::EmptyVocabulary);
        }
        Self::from_counts(counts, num_count, size_limit)
    }

    /// Keeps the `size_limit` most frequent entries of `counts`.
    pub fn from_counts(
        counts: HashMap<String, u64>,
        num_count: u64,
        size_limit: usize,
    ) -> Result<Self> {
        if size_limit == 0 {
            return Err(Error::InvalidArgument("vocabulary size limit must be ≥ 1".into()));
        }
        let mut entries: Vec<(String, u64)> = counts.into_iter().collect();
        entries.sort_unstable_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        entries.truncate(size_limit);

        let mut id_to_token = Vec::with_capacity(entries.len() + RESERVED);
        let mut frequencies = Vec::with_capacity(entries.len() + RESERVED);
        id_to_token.push(PAD_TOKEN.to_string());
        frequencies.push(0);
        id_to_token.push(NUM_TOKEN.to_string());
        frequencies.push(num_count);
        for (token, freq) in entries {
            id_to_token.push(token);
            frequencies.push(freq);
        }
        let token_to_id = index(&id_to_token);
        Ok(Vocabulary {
            token_to_id,
            id_to_token,
            frequencies,
            size_limit,
        })
    }

    /// Re-applies pruning with a (possibly smaller) limit.
    pub fn prune(&self, size_limit: usize) -> Result<Self> {
        let counts = self.id_to_token[RESERVED..]
            .iter()
            .cloned()
            .zip(self.frequencies[RESERVED..].iter().copied())
            .collect();
        Self::from_counts(counts, self.frequencies[Self::NUM as usize], size_limit)
    }

    pub fn len(&self) -> usize {
        self.id_to_token.len()
    }

    pub fn is_empty(&self) -> bool {
        self.id_to_token.is_empty()
    }

    pub fn size_limit(&self) -> usize {
        self.size_limit
    }

    pub fn id(&self, token: &str) -> Option<WordId> {
        self.token_to_id.get(token).copied()
    }

    pub fn token(&self, id: WordId) -> Option<&str> {
        self.id_to_token.get(id as usize).map(String::as_str)
    }

    pub fn frequency(&self, id: WordId) -> u64 {
        self.frequencies.get(id as usize).copied().unwrap_or(0)
    }

    pub fn is_reserved(id: WordId) -> bool {
        (id as usize) < RESERVED
    }

    pub fn tokens(&self) -> &[String] {
        &self.id_to_token
    }

    /// Maps tokens to ids, dropping out-of-vocabulary tokens.
    pub fn encode<S: AsRef<str>>(&self, tokens: &[S]) -> Vec<WordId> {
        tokens.iter().filter_map(|t| self.id(t.as_ref())).collect()
    }

    pub fn decode(&self, ids: &[WordId]) -> Vec<&str> {
        ids.iter().filter_map(|&id| self.token(id)).collect()
    }

    /// Writes `<token>\t<id>\t<frequency>` lines, reserved tokens first.
    pub fn write_tsv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for (id, (token, freq)) in self.id_to_token.iter().zip(&self.frequencies).enumerate() {
            writeln!(w, "{token}\t{id}\t{freq}")?;
        }
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = BufWriter::new(file);
        self.write_tsv(&mut w).map_err(|e| Error::io(path, e))?;
        w.flush().map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read_tsv(BufReader::new(file), &path.display().to_string())
    }

    pub fn read_tsv<R: BufRead>(r: R, source: &str) -> Result<Self> {
        let mut id_to_token = Vec::new();
        let mut frequencies = Vec::new();
        for (i, line) in r.lines().enumerate() {
            let line = line.map_err(|e| Error::io(source, e))?;
            if line.is_empty() {
                continue;
            }
            let lineno = i + 1;
            let mut parts = line.split('\t');
            let (Some(token), Some(id), Some(freq), None) =
                (parts.next(), parts.next(), parts.next(), parts.next())
            else {
                return Err(Error::parse(source, lineno, "expected <token>\\t<id>\\t<frequency>"));
            };
            let id: usize = id
                .parse()
                .map_err(|_| Error::parse(source, lineno, format!("bad id {id:?}")))?;
            let freq: u64 = freq
                .parse()
                .map_err(|_| Error::parse(source, lineno, format!("bad frequency {freq:?}")))?;
            if id != id_to_token.len() {
                return Err(Error::parse(source, lineno, format!("id {id} out of sequence")));
            }
            id_to_token.push(token.to_string());
            frequencies.push(freq);
        }
        if id_to_token.len() < RESERVED
            || id_to_token[Self::PAD as usize] != PAD_TOKEN
            || id_to_token[Self::NUM as usize] != NUM_TOKEN
        {
            return Err(Error::parse(source, 1, "reserved tokens missing"));
        }
        let token_to_id = index(&id_to_token);
        if token_to_id.len() != id_to_token.len() {
            return Err(Error::parse(source, 0, "duplicate token"));
        }
        let size_limit = (id_to_token.len() - RESERVED).max(1);
        Ok(Vocabulary {
            token_to_id,
            id_to_token,
            frequencies,
            size_limit,
        })
    }
}

fn index(id_to_token: &[String]) -> HashMap<String, WordId> {
    id_to_token
        .iter()
        .enumerate()
        .map(|(i, t)| (t.clone(), i as WordId))
        .collect()
}
