use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;
use sert::eval::{Metric, MetricReport, QueryMetrics};
use sert::{Error, Result};

pub fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let f = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(f);
    serde_json::to_writer_pretty(&mut w, value)
        .map_err(io::Error::from)
        .and_then(|_| writeln!(w))
        .and_then(|_| w.flush())
        .map_err(|e| Error::io(path, e))
}

/// Writes `rows` as CSV, header taken from the field names.
pub fn write_csv<R: Serialize>(path: &Path, rows: &[R]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::io(path, csv_io(e)))?;
    for r in rows {
        w.serialize(r).map_err(|e| Error::io(path, csv_io(e)))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn csv_io(e: csv::Error) -> io::Error {
    match e.into_kind() {
        csv::ErrorKind::Io(e) => e,
        other => io::Error::other(format!("{other:?}")),
    }
}

fn row(label: &str, width: usize, m: &QueryMetrics) -> String {
    let mut s = format!("{label:<width$}");
    for metric in Metric::ALL {
        s.push_str(&format!("  {:>8.4}", m.get(metric)));
    }
    s
}

fn header(width: usize) -> String {
    let mut s = format!("{:<width$}", "query");
    for metric in Metric::ALL {
        s.push_str(&format!("  {:>8}", metric.name()));
    }
    s
}

/// Aligned per-query table with the macro averages last.
pub fn metric_table(report: &MetricReport) -> String {
    let width = report.per_query.keys().map(String::len).max().unwrap_or(0).max(5);
    let mut lines = vec![header(width)];
    for (q, m) in &report.per_query {
        lines.push(row(q, width, m));
    }
    lines.push(row("all", width, &report.aggregate));
    lines.join("\n")
}

/// Two systems' averages one above the other.
pub fn side_by_side(a: (&str, &MetricReport), b: (&str, &MetricReport)) -> String {
    let width = a.0.len().max(b.0.len()).max(6);
    let mut s = format!("{:<width$}", "system");
    for metric in Metric::ALL {
        s.push_str(&format!("  {:>8}", metric.name()));
    }
    [s, row(a.0, width, &a.1.aggregate), row(b.0, width, &b.1.aggregate)].join("\n")
}
