//! Document ingestion: tokenization, vocabulary pruning, candidate
//! associations and n-gram training windows.

mod document;
pub mod synth;
mod tokenize;
mod vocab;

pub use document::{
    extract_ngrams, parse_jsonl, read_jsonl, write_jsonl, CandidateId, CandidateRegistry, Corpus,
    Document, NGramInstance, RawDocument,
};
pub use synth::{generate_synthetic_corpus, SynthConfig, SynthVariant, SyntheticCorpus};
pub use tokenize::{is_numeric, Tokenizer, NUM_TOKEN, PAD_TOKEN};
pub use vocab::{Vocabulary, WordId, DEFAULT_VOCAB_SIZE, RESERVED};
