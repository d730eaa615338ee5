use std::collections::{BTreeSet, HashMap};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::corpus::tokenize::Tokenizer;
use crate::corpus::vocab::{Vocabulary, WordId};
use crate::error::{Error, Result};

pub type CandidateId = usize;

/// One line of the JSON-lines corpus input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawDocument {
    pub doc_id: String,
    pub text: String,
    #[serde(default)]
    pub candidates: Vec<String>,
}

/// Dense index over candidate identifiers.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CandidateRegistry {
    candidate_to_id: HashMap<String, CandidateId>,
    names: Vec<String>,
}

impl CandidateRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registers names in the given order, skipping duplicates.
    pub fn from_names<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut reg = Self::new();
        for n in names {
            reg.register(n.into());
        }
        reg
    }

    /// Returns the id of `name`, adding it if unseen.
    pub fn register(&mut self, name: String) -> CandidateId {
        if let Some(&id) = self.candidate_to_id.get(&name) {
            return id;
        }
        let id = self.names.len();
        self.candidate_to_id.insert(name.clone(), id);
        self.names.push(name);
        id
    }

    pub fn id(&self, name: &str) -> Option<CandidateId> {
        self.candidate_to_id.get(name).copied()
    }

    pub fn name(&self, id: CandidateId) -> Option<&str> {
        self.names.get(id).map(String::as_str)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn write_tsv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for (id, name) in self.names.iter().enumerate() {
            writeln!(w, "{name}\t{id}")?;
        }
        Ok(())
    }

    pub fn read_tsv<R: BufRead>(r: R, source: &str) -> Result<Self> {
        let mut reg = Self::new();
        for (i, line) in r.lines().enumerate() {
            let line = line.map_err(|e| Error::io(source, e))?;
            if line.is_empty() {
                continue;
            }
            let (name, id) = line
                .split_once('\t')
                .ok_or_else(|| Error::parse(source, i + 1, "expected <candidate>\\t<id>"))?;
            let id: usize = id
                .trim()
                .parse()
                .map_err(|_| Error::parse(source, i + 1, format!("bad id {id:?}")))?;
            if id != reg.len() || reg.id(name).is_some() {
                return Err(Error::parse(source, i + 1, "candidate ids must be dense and unique"));
            }
            reg.register(name.to_string());
        }
        Ok(reg)
    }
}

/// A tokenized, vocabulary-encoded document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub doc_id: String,
    pub tokens: Vec<WordId>,
    /// Sorted, duplicate-free.
    pub associations: Vec<CandidateId>,
}

impl Document {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Documents without associations or tokens produce no training instances.
    pub fn is_trainable(&self) -> bool {
        !self.associations.is_empty() && !self.tokens.is_empty()
    }

    /// Uniform distribution over the associated candidates.
    pub fn target(&self) -> Vec<(CandidateId, f64)> {
        let w = 1.0 / self.associations.len() as f64;
        self.associations.iter().map(|&c| (c, w)).collect()
    }
}

/// A fixed-width training window.
#[derive(Debug, Clone, PartialEq)]
pub struct NGramInstance {
    pub word_ids: Vec<WordId>,
    /// Index of the source document within its corpus.
    pub source_doc: usize,
    /// Token length of the source document.
    pub doc_len: usize,
    /// Sparse target distribution, shared by every window of a document.
    pub target: Arc<[(CandidateId, f64)]>,
}

/// Cuts `doc` into windows of width `n`.
///
/// Non-overlapping windows advance by `n`, overlapping ones by 1; windows
/// running past the end are filled with [`Vocabulary::PAD`].
pub fn extract_ngrams(
    doc_index: usize,
    doc: &Document,
    n: usize,
    overlapping: bool,
) -> Result<Vec<NGramInstance>> {
    if n == 0 {
        return Err(Error::InvalidArgument("n-gram width must be ≥ 1".into()));
    }
    if !doc.is_trainable() {
        return Ok(Vec::new());
    }
    let target: Arc<[(CandidateId, f64)]> = doc.target().into();
    let stride = if overlapping { 1 } else { n };
    let len = doc.tokens.len();
    Ok((0..len)
        .step_by(stride)
        .map(|start| {
            let mut word_ids: Vec<WordId> =
                doc.tokens[start..(start + n).min(len)].to_vec();
            word_ids.resize(n, Vocabulary::PAD);
            NGramInstance {
                word_ids,
                source_doc: doc_index,
                doc_len: len,
                target: Arc::clone(&target),
            }
        })
        .collect())
}

/// Vocabulary, candidate registry and encoded documents.
#[derive(Debug, Clone)]
pub struct Corpus {
    pub vocabulary: Vocabulary,
    pub registry: CandidateRegistry,
    pub documents: Vec<Document>,
}

/// Serialized form of an encoded document.
#[derive(Debug, Serialize, Deserialize)]
struct EncodedLine {
    doc_id: String,
    tokens: Vec<WordId>,
    candidates: Vec<String>,
}

impl Corpus {
    /// Tokenizes, builds the pruned vocabulary and encodes every document.
    ///
    /// Candidates are registered in lexicographic order.
    pub fn index(raw: &[RawDocument], tokenizer: &Tokenizer, size_limit: usize) -> Result<Self> {
        let tokenized: Vec<Vec<String>> = raw.iter().map(|d| tokenizer.tokenize(&d.text)).collect();
        let vocabulary = Vocabulary::build(&tokenized, size_limit)?;
        let names: BTreeSet<&str> = raw
            .iter()
            .flat_map(|d| d.candidates.iter().map(String::as_str))
            .collect();
        let registry = CandidateRegistry::from_names(names);
        let documents = raw
            .iter()
            .zip(&tokenized)
            .map(|(d, toks)| Document {
                doc_id: d.doc_id.clone(),
                tokens: vocabulary.encode(toks),
                associations: associations(&registry, &d.candidates),
            })
            .collect();
        Ok(Corpus {
            vocabulary,
            registry,
            documents,
        })
    }

    /// Length of the longest document with at least one association.
    pub fn max_training_length(&self) -> usize {
        self.documents
            .iter()
            .filter(|d| d.is_trainable())
            .map(Document::len)
            .max()
            .unwrap_or(0)
    }

    pub fn training_instances(&self, n: usize, overlapping: bool) -> Result<Vec<NGramInstance>> {
        let mut out = Vec::new();
        for (i, doc) in self.documents.iter().enumerate() {
            out.extend(extract_ngrams(i, doc, n, overlapping)?);
        }
        Ok(out)
    }

    /// Writes `vocab.tsv`, `candidates.tsv` and `documents.jsonl` into `dir`.
    pub fn save(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        self.vocabulary.save(&dir.join("vocab.tsv"))?;
        let reg_path = dir.join("candidates.tsv");
        let mut w = BufWriter::new(File::create(&reg_path).map_err(|e| Error::io(&reg_path, e))?);
        self.registry
            .write_tsv(&mut w)
            .and_then(|_| w.flush())
            .map_err(|e| Error::io(&reg_path, e))?;
        let doc_path = dir.join("documents.jsonl");
        let mut w = BufWriter::new(File::create(&doc_path).map_err(|e| Error::io(&doc_path, e))?);
        for d in &self.documents {
            let line = EncodedLine {
                doc_id: d.doc_id.clone(),
                tokens: d.tokens.clone(),
                candidates: d
                    .associations
                    .iter()
                    .filter_map(|&c| self.registry.name(c).map(String::from))
                    .collect(),
            };
            serde_json::to_writer(&mut w, &line).map_err(|e| Error::io(&doc_path, e.into()))?;
            w.write_all(b"\n").map_err(|e| Error::io(&doc_path, e))?;
        }
        w.flush().map_err(|e| Error::io(&doc_path, e))
    }

    pub fn load(dir: &Path) -> Result<Self> {
        let vocabulary = Vocabulary::load(&dir.join("vocab.tsv"))?;
        let reg_path = dir.join("candidates.tsv");
        let f = File::open(&reg_path).map_err(|e| Error::io(&reg_path, e))?;
        let registry = CandidateRegistry::read_tsv(BufReader::new(f), &reg_path.display().to_string())?;
        let doc_path = dir.join("documents.jsonl");
        let source = doc_path.display().to_string();
        let f = File::open(&doc_path).map_err(|e| Error::io(&doc_path, e))?;
        let mut documents = Vec::new();
        for (i, line) in BufReader::new(f).lines().enumerate() {
            let line = line.map_err(|e| Error::io(&doc_path, e))?;
            if line.trim().is_empty() {
                continue;
            }
            let enc: EncodedLine = serde_json::from_str(&line)
                .map_err(|e| Error::parse(&source, i + 1, e.to_string()))?;
            if let Some(bad) = enc.tokens.iter().find(|&&t| t as usize >= vocabulary.len()) {
                return Err(Error::parse(&source, i + 1, format!("token id {bad} out of range")));
            }
            let mut assoc = Vec::with_capacity(enc.candidates.len());
            for c in &enc.candidates {
                assoc.push(registry.id(c).ok_or_else(|| {
                    Error::parse(&source, i + 1, format!("unregistered candidate {c:?}"))
                })?);
            }
            assoc.sort_unstable();
            assoc.dedup();
            documents.push(Document {
                doc_id: enc.doc_id,
                tokens: enc.tokens,
                associations: assoc,
            });
        }
        Ok(Corpus {
            vocabulary,
            registry,
            documents,
        })
    }
}

fn associations(registry: &CandidateRegistry, names: &[String]) -> Vec<CandidateId> {
    let mut ids: Vec<CandidateId> = names.iter().filter_map(|n| registry.id(n)).collect();
    ids.sort_unstable();
    ids.dedup();
    ids
}

/// Reads a JSON-lines corpus; malformed lines are reported with their 1-based number.
pub fn read_jsonl(path: &Path) -> Result<Vec<RawDocument>> {
    let f = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_jsonl(BufReader::new(f), &path.display().to_string())
}

pub fn parse_jsonl<R: BufRead>(r: R, source: &str) -> Result<Vec<RawDocument>> {
    let mut docs = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line.map_err(|e| Error::io(source, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let doc: RawDocument =
            serde_json::from_str(&line).map_err(|e| Error::parse(source, i + 1, e.to_string()))?;
        docs.push(doc);
    }
    Ok(docs)
}

pub fn write_jsonl(path: &Path, docs: &[RawDocument]) -> Result<()> {
    let f = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(f);
    for d in docs {
        serde_json::to_writer(&mut w, d).map_err(|e| Error::io(path, e.into()))?;
        w.write_all(b"\n").map_err(|e| Error::io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}
