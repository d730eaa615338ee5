use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};

/// Graded relevance judgments: query id → candidate id → grade.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Qrels {
    pub queries: BTreeMap<String, BTreeMap<String, u32>>,
}

impl Qrels {
    pub fn insert(&mut self, query: &str, candidate: &str, grade: u32) {
        self.queries
            .entry(query.to_string())
            .or_default()
            .insert(candidate.to_string(), grade);
    }

    pub fn get(&self, query: &str) -> Option<&BTreeMap<String, u32>> {
        self.queries.get(query)
    }

    /// Number of candidates with grade > 0.
    pub fn relevant_count(&self, query: &str) -> usize {
        self.get(query)
            .map_or(0, |j| j.values().filter(|&&g| g > 0).count())
    }

    /// `<query_id> 0 <candidate_id> <relevance>`.
    pub fn write_trec<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for (q, judged) in &self.queries {
            for (c, g) in judged {
                writeln!(w, "{q} 0 {c} {g}")?;
            }
        }
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let f = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = BufWriter::new(f);
        self.write_trec(&mut w)
            .and_then(|_| w.flush())
            .map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let f = File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read_trec(BufReader::new(f), &path.display().to_string())
    }

    pub fn read_trec<R: BufRead>(r: R, source: &str) -> Result<Self> {
        let mut qrels = Qrels::default();
        for (i, line) in r.lines().enumerate() {
            let line = line.map_err(|e| Error::io(source, e))?;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 4 {
                return Err(Error::parse(source, i + 1, "expected 4 whitespace-separated fields"));
            }
            let grade: u32 = fields[3].parse().map_err(|_| {
                Error::parse(source, i + 1, format!("relevance must be a non-negative integer, got {:?}", fields[3]))
            })?;
            qrels.insert(fields[0], fields[2], grade);
        }
        Ok(qrels)
    }
}
