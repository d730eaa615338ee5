use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};

/// A free-text topic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    pub id: String,
    pub text: String,
}

/// Reads `<query_id>\t<text>` lines.
pub fn read_queries(path: &Path) -> Result<Vec<Query>> {
    let f = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_queries(BufReader::new(f), &path.display().to_string())
}

pub fn parse_queries<R: BufRead>(r: R, source: &str) -> Result<Vec<Query>> {
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line.map_err(|e| Error::io(source, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let (id, text) = line
            .split_once('\t')
            .ok_or_else(|| Error::parse(source, i + 1, "expected <query_id>\\t<text>"))?;
        out.push(Query {
            id: id.trim().to_string(),
            text: text.to_string(),
        });
    }
    Ok(out)
}

pub fn write_queries(path: &Path, queries: &[Query]) -> Result<()> {
    let f = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(f);
    for q in queries {
        writeln!(w, "{}\t{}", q.id, q.text).map_err(|e| Error::io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}
