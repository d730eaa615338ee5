use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::eval::qrels::Qrels;
use crate::ranking::Run;

/// Retrieval measures reported per query and as macro averages.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Metric {
    Map,
    Mrr,
    Ndcg100,
    P5,
    P10,
}

impl Metric {
    pub const ALL: [Metric; 5] = [Metric::Map, Metric::Mrr, Metric::Ndcg100, Metric::P5, Metric::P10];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Map => "MAP",
            Metric::Mrr => "MRR",
            Metric::Ndcg100 => "NDCG@100",
            Metric::P5 => "P@5",
            Metric::P10 => "P@10",
        }
    }
}

/// How graded judgments turn into NDCG gains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GainMode {
    /// `2^grade - 1`.
    #[default]
    Exponential,
    /// 1 for any positive grade.
    Binary,
}

impl GainMode {
    fn gain(self, grade: u32) -> f64 {
        match self {
            GainMode::Exponential => 2f64.powi(grade as i32) - 1.0,
            GainMode::Binary => f64::from(u8::from(grade > 0)),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct QueryMetrics {
    #[serde(rename = "MAP")]
    pub ap: f64,
    #[serde(rename = "MRR")]
    pub rr: f64,
    #[serde(rename = "NDCG@100")]
    pub ndcg100: f64,
    #[serde(rename = "P@5")]
    pub p5: f64,
    #[serde(rename = "P@10")]
    pub p10: f64,
}

impl QueryMetrics {
    pub fn get(&self, m: Metric) -> f64 {
        match m {
            Metric::Map => self.ap,
            Metric::Mrr => self.rr,
            Metric::Ndcg100 => self.ndcg100,
            Metric::P5 => self.p5,
            Metric::P10 => self.p10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricReport {
    pub per_query: BTreeMap<String, QueryMetrics>,
    pub aggregate: QueryMetrics,
    /// Judged queries left out of the averages for lacking a relevant candidate.
    pub skipped_without_relevant: usize,
}

impl MetricReport {
    pub fn values(&self, m: Metric) -> Vec<f64> {
        self.per_query.values().map(|q| q.get(m)).collect()
    }
}

fn is_relevant(judged: &BTreeMap<String, u32>, candidate: &str) -> bool {
    judged.get(candidate).is_some_and(|&g| g > 0)
}

/// Mean of precision at each relevant position, over all `R` relevant
/// candidates. `None` when the query has no relevant candidate.
pub fn average_precision<'a, I>(ranked: I, judged: &BTreeMap<String, u32>) -> Option<f64>
where
    I: IntoIterator<Item = &'a str>,
{
    let total = judged.values().filter(|&&g| g > 0).count();
    if total == 0 {
        return None;
    }
    let mut hits = 0usize;
    let mut sum = 0.0;
    for (i, c) in ranked.into_iter().enumerate() {
        if is_relevant(judged, c) {
            hits += 1;
            sum += hits as f64 / (i + 1) as f64;
        }
    }
    Some(sum / total as f64)
}

pub fn reciprocal_rank<'a, I>(ranked: I, judged: &BTreeMap<String, u32>) -> f64
where
    I: IntoIterator<Item = &'a str>,
{
    ranked
        .into_iter()
        .position(|c| is_relevant(judged, c))
        .map_or(0.0, |p| 1.0 / (p + 1) as f64)
}

pub fn precision_at<'a, I>(ranked: I, judged: &BTreeMap<String, u32>, k: usize) -> f64
where
    I: IntoIterator<Item = &'a str>,
{
    let hits = ranked.into_iter().take(k).filter(|c| is_relevant(judged, c)).count();
    hits as f64 / k as f64
}

/// DCG@k with `log2(rank + 1)` discount, normalized by the ideal ordering of
/// the judged grades.
pub fn ndcg_at<'a, I>(ranked: I, judged: &BTreeMap<String, u32>, k: usize, gain: GainMode) -> f64
where
    I: IntoIterator<Item = &'a str>,
{
    let discount = |i: usize| ((i + 2) as f64).log2();
    let dcg: f64 = ranked
        .into_iter()
        .take(k)
        .enumerate()
        .map(|(i, c)| gain.gain(judged.get(c).copied().unwrap_or(0)) / discount(i))
        .sum();
    let mut ideal: Vec<u32> = judged.values().copied().filter(|&g| g > 0).collect();
    ideal.sort_unstable_by(|a, b| b.cmp(a));
    let idcg: f64 = ideal
        .iter()
        .take(k)
        .enumerate()
        .map(|(i, &g)| gain.gain(g) / discount(i))
        .sum();
    if idcg > 0.0 {
        dcg / idcg
    } else {
        0.0
    }
}

pub fn query_metrics<'a, I>(ranked: I, judged: &BTreeMap<String, u32>, gain: GainMode) -> Option<QueryMetrics>
where
    I: IntoIterator<Item = &'a str>,
    I::IntoIter: Clone,
{
    let it = ranked.into_iter();
    Some(QueryMetrics {
        ap: average_precision(it.clone(), judged)?,
        rr: reciprocal_rank(it.clone(), judged),
        ndcg100: ndcg_at(it.clone(), judged, 100, gain),
        p5: precision_at(it.clone(), judged, 5),
        p10: precision_at(it, judged, 10),
    })
}

/// Scores `run` against every judged query with at least one relevant
/// candidate. Judged queries absent from the run score zero.
pub fn evaluate(run: &Run, qrels: &Qrels, gain: GainMode) -> Result<MetricReport> {
    if !qrels.queries.keys().any(|q| run.queries.contains_key(q)) {
        return Err(Error::DisjointQueries);
    }
    let mut per_query = BTreeMap::new();
    let mut skipped = 0;
    for (qid, judged) in &qrels.queries {
        let entries = run.queries.get(qid).map(Vec::as_slice).unwrap_or_default();
        let names = entries.iter().map(|e| e.candidate.as_str());
        match query_metrics(names, judged, gain) {
            Some(m) => {
                per_query.insert(qid.clone(), m);
            }
            None => skipped += 1,
        }
    }
    let n = per_query.len().max(1) as f64;
    let mean = |m: Metric| per_query.values().map(|q| q.get(m)).sum::<f64>() / n;
    let aggregate = QueryMetrics {
        ap: mean(Metric::Map),
        rr: mean(Metric::Mrr),
        ndcg100: mean(Metric::Ndcg100),
        p5: mean(Metric::P5),
        p10: mean(Metric::P10),
    };
    Ok(MetricReport {
        per_query,
        aggregate,
        skipped_without_relevant: skipped,
    })
}
