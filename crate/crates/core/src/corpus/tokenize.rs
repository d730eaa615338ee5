use std::collections::HashSet;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

/// Reserved token standing in for numbers.
pub const NUM_TOKEN: &str = "<num>";
/// Reserved token filling incomplete n-gram windows.
pub const PAD_TOKEN: &str = "<pad>";

const DEFAULT_STOPWORDS: &str = include_str!("../../data/stopwords.txt");

/// Lowercasing, punctuation-stripping, stopword-removing tokenizer.
///
/// A whitespace-delimited chunk is first trimmed of surrounding punctuation. If
/// what remains is a number (ASCII digit groups optionally joined by `.`, `,`
/// or `-`) it becomes [`NUM_TOKEN`]. Otherwise the chunk is split on every
/// non-alphanumeric character; all-digit pieces become [`NUM_TOKEN`] and
/// stopwords are dropped.
#[derive(Debug, Clone)]
pub struct Tokenizer {
    stopwords: HashSet<String>,
}

impl Default for Tokenizer {
    fn default() -> Self {
        Self::from_stopword_list(DEFAULT_STOPWORDS)
    }
}

impl Tokenizer {
    /// Parses one word per line; blank lines and `#` comments are ignored.
    pub fn from_stopword_list(list: &str) -> Self {
        let stopwords = list
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(str::to_lowercase)
            .collect();
        Tokenizer { stopwords }
    }

    pub fn from_stopword_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(Self::from_stopword_list(&text))
    }

    /// A tokenizer that keeps every word.
    pub fn without_stopwords() -> Self {
        Tokenizer {
            stopwords: HashSet::new(),
        }
    }

    pub fn is_stopword(&self, word: &str) -> bool {
        self.stopwords.contains(word)
    }

    pub fn tokenize(&self, text: &str) -> Vec<String> {
        let mut out = Vec::new();
        for chunk in text.split_whitespace() {
            let lower = chunk.to_lowercase();
            let trimmed = lower.trim_matches(|c: char| !c.is_alphanumeric());
            if trimmed.is_empty() {
                continue;
            }
            if is_numeric(trimmed) {
                out.push(NUM_TOKEN.to_string());
                continue;
            }
            for piece in trimmed.split(|c: char| !c.is_alphanumeric()) {
                if piece.is_empty() {
                    continue;
                }
                if piece.bytes().all(|b| b.is_ascii_digit()) {
                    out.push(NUM_TOKEN.to_string());
                } else if !self.stopwords.contains(piece) {
                    out.push(piece.to_string());
                }
            }
        }
        out
    }
}

/// Digit groups separated by single `.`, `,` or `-`.
pub fn is_numeric(token: &str) -> bool {
    let mut groups = 0;
    for group in token.split(['.', ',', '-']) {
        if group.is_empty() || !group.bytes().all(|b| b.is_ascii_digit()) {
            return false;
        }
        groups += 1;
    }
    groups > 0
}
