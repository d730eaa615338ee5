//! Ranked candidate lists and the TREC run format.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::corpus::{CandidateId, CandidateRegistry};
use crate::error::{Error, Result};

/// Candidates for one query, best first.
#[derive(Debug, Clone, PartialEq)]
pub struct Ranking {
    pub query_id: String,
    pub entries: Vec<(CandidateId, f64)>,
}

impl Ranking {
    /// Orders candidate `i` (with score `scores[i]`) by descending score, ties
    /// by ascending id.
    pub fn from_scores(query_id: impl Into<String>, scores: &[f64]) -> Self {
        let mut entries: Vec<(CandidateId, f64)> = scores.iter().copied().enumerate().collect();
        sort_entries(&mut entries);
        Ranking {
            query_id: query_id.into(),
            entries,
        }
    }

    pub fn candidates(&self) -> impl Iterator<Item = CandidateId> + '_ {
        self.entries.iter().map(|&(c, _)| c)
    }

    /// 1-based rank of every candidate, indexed by candidate id.
    pub fn ranks(&self, n_candidates: usize) -> Vec<Option<usize>> {
        let mut out = vec![None; n_candidates];
        for (pos, &(c, _)) in self.entries.iter().enumerate() {
            if c < n_candidates {
                out[c] = Some(pos + 1);
            }
        }
        out
    }
}

/// Descending score, ascending key on ties.
pub fn sort_entries<K: Ord>(entries: &mut [(K, f64)]) {
    entries.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunEntry {
    pub candidate: String,
    pub score: f64,
}

/// A set of rankings keyed by query id, in TREC run form.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Run {
    pub tag: String,
    pub queries: BTreeMap<String, Vec<RunEntry>>,
}

impl Run {
    pub fn new(tag: impl Into<String>) -> Self {
        Run {
            tag: tag.into(),
            queries: BTreeMap::new(),
        }
    }

    pub fn from_rankings(tag: &str, rankings: &[Ranking], registry: &CandidateRegistry) -> Self {
        let mut run = Run::new(tag);
        for r in rankings {
            run.push(r, registry);
        }
        run
    }

    pub fn push(&mut self, ranking: &Ranking, registry: &CandidateRegistry) {
        let entries = ranking
            .entries
            .iter()
            .map(|&(c, score)| RunEntry {
                candidate: registry.name(c).map_or_else(|| c.to_string(), String::from),
                score,
            })
            .collect();
        self.queries.insert(ranking.query_id.clone(), entries);
    }

    /// `<query_id> Q0 <candidate_id> <rank> <score> <tag>`.
    pub fn write_trec<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for (qid, entries) in &self.queries {
            for (i, e) in entries.iter().enumerate() {
                writeln!(w, "{qid} Q0 {} {} {} {}", e.candidate, i + 1, e.score, self.tag)?;
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

    /// Entries are ordered by the rank column, then by file order.
    pub fn read_trec<R: BufRead>(r: R, source: &str) -> Result<Self> {
        let mut tag = String::new();
        let mut raw: BTreeMap<String, Vec<(usize, usize, RunEntry)>> = BTreeMap::new();
        for (i, line) in r.lines().enumerate() {
            let line = line.map_err(|e| Error::io(source, e))?;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 6 {
                return Err(Error::parse(source, i + 1, "expected 6 whitespace-separated fields"));
            }
            let rank: usize = fields[3]
                .parse()
                .map_err(|_| Error::parse(source, i + 1, format!("bad rank {:?}", fields[3])))?;
            let score: f64 = fields[4]
                .parse()
                .map_err(|_| Error::parse(source, i + 1, format!("bad score {:?}", fields[4])))?;
            if tag.is_empty() {
                tag = fields[5].to_string();
            }
            let entries = raw.entry(fields[0].to_string()).or_default();
            if entries.iter().any(|(_, _, e)| e.candidate == fields[2]) {
                return Err(Error::parse(source, i + 1, format!("duplicate candidate {}", fields[2])));
            }
            entries.push((
                rank,
                i,
                RunEntry {
                    candidate: fields[2].to_string(),
                    score,
                },
            ));
        }
        let queries = raw
            .into_iter()
            .map(|(q, mut v)| {
                v.sort_by_key(|&(rank, line, _)| (rank, line));
                (q, v.into_iter().map(|(_, _, e)| e).collect())
            })
            .collect();
        Ok(Run { tag, queries })
    }
}
