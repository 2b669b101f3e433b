use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Markdown,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "markdown" | "md" => Ok(ReportFormat::Markdown),
            "csv" => Ok(ReportFormat::Csv),
            _ => Err(Error::invalid(format!("unknown report format {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RowStatus {
    Ok,
    Failed(String),
}

/// Timings for one manifest entry, in seconds.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub dataset: String,
    pub task: String,
    pub variant: String,
    pub k: usize,
    pub status: RowStatus,
    /// Index construction per trial; empty for tasks without a build phase.
    pub build_seconds: Vec<f64>,
    /// Query (k-NN) or full clustering (k-means) per trial.
    pub run_seconds: Vec<f64>,
    pub iterations: Option<usize>,
}

fn mean(values: &[f64]) -> Option<f64> {
    (!values.is_empty()).then(|| values.iter().sum::<f64>() / values.len() as f64)
}

impl BenchRow {
    pub fn failed(dataset: &str, task: &str, variant: &str, k: usize, reason: String) -> Self {
        BenchRow {
            dataset: dataset.to_string(),
            task: task.to_string(),
            variant: variant.to_string(),
            k,
            status: RowStatus::Failed(reason),
            build_seconds: Vec::new(),
            run_seconds: Vec::new(),
            iterations: None,
        }
    }

    pub fn mean_build(&self) -> Option<f64> {
        mean(&self.build_seconds)
    }

    pub fn mean_run(&self) -> Option<f64> {
        mean(&self.run_seconds)
    }

    pub fn trials(&self) -> usize {
        self.run_seconds.len()
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
}

impl BenchReport {
    pub fn failures(&self) -> impl Iterator<Item = &BenchRow> {
        self.rows.iter().filter(|r| matches!(r.status, RowStatus::Failed(_)))
    }
}

fn secs(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |s| format!("{s:.4}"))
}

const CSV_HEADER: [&str; 10] = [
    "dataset",
    "task",
    "variant",
    "k",
    "status",
    "iterations",
    "build_mean",
    "run_mean",
    "build_trials",
    "run_trials",
];

/// Renders the report. Markdown has one table per task with seconds to four
/// decimals; CSV keeps full precision so it can be read back with
/// [`parse_csv_report`].
pub fn emit_report(report: &BenchReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Markdown => markdown(report),
        ReportFormat::Csv => csv_text(report),
    }
}

fn markdown(report: &BenchReport) -> String {
    let mut out = String::new();
    let status = |r: &BenchRow| match &r.status {
        RowStatus::Ok => "ok".to_string(),
        RowStatus::Failed(msg) => format!("failed: {}", msg.replace('|', "/")),
    };

    out.push_str("### k-NN benchmarks (seconds)\n\n");
    out.push_str("| dataset | variant | k | build | query | total | trials | status |\n");
    out.push_str("|---|---|---:|---:|---:|---:|---:|---|\n");
    for r in report.rows.iter().filter(|r| r.task == "knn") {
        let total = r.mean_build().zip(r.mean_run()).map(|(b, q)| b + q);
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} | {} | {} | {} | {} |",
            r.dataset,
            r.variant,
            r.k,
            secs(r.mean_build()),
            secs(r.mean_run()),
            secs(total),
            r.trials(),
            status(r)
        );
    }

    out.push_str("\n### k-means benchmarks (seconds)\n\n");
    out.push_str("| dataset | variant | clusters | time | iterations | trials | status |\n");
    out.push_str("|---|---|---:|---:|---:|---:|---|\n");
    for r in report.rows.iter().filter(|r| r.task == "kmeans") {
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} | {} | {} | {} |",
            r.dataset,
            r.variant,
            r.k,
            secs(r.mean_run()),
            r.iterations.map_or_else(|| "-".to_string(), |i| i.to_string()),
            r.trials(),
            status(r)
        );
    }
    out
}

fn join(values: &[f64]) -> String {
    values.iter().map(f64::to_string).collect::<Vec<_>>().join(";")
}

fn csv_text(report: &BenchReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("write to memory");
    for r in &report.rows {
        let status = match &r.status {
            RowStatus::Ok => "ok".to_string(),
            RowStatus::Failed(msg) => format!("failed: {msg}"),
        };
        w.write_record([
            r.dataset.clone(),
            r.task.clone(),
            r.variant.clone(),
            r.k.to_string(),
            status,
            r.iterations.map_or_else(String::new, |i| i.to_string()),
            r.mean_build().map_or_else(String::new, |v| v.to_string()),
            r.mean_run().map_or_else(String::new, |v| v.to_string()),
            join(&r.build_seconds),
            join(&r.run_seconds),
        ])
        .expect("write to memory");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv output is utf-8")
}

/// Reads back the CSV form of [`emit_report`].
pub fn parse_csv_report(text: &str) -> Result<BenchReport> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let bad = |what: &str| Error::invalid(format!("report csv: {what}"));
    let headers = reader.headers().map_err(|e| bad(&e.to_string()))?;
    if headers.iter().ne(CSV_HEADER) {
        return Err(bad("unexpected header"));
    }
    let split = |s: &str| -> Result<Vec<f64>> {
        if s.is_empty() {
            return Ok(Vec::new());
        }
        s.split(';').map(|v| v.parse().map_err(|_| bad("bad trial value"))).collect()
    };
    let mut rows = Vec::new();
    for record in reader.records() {
        let rec = record.map_err(|e| bad(&e.to_string()))?;
        let status = match &rec[4] {
            "ok" => RowStatus::Ok,
            other => RowStatus::Failed(other.strip_prefix("failed: ").unwrap_or(other).to_string()),
        };
        rows.push(BenchRow {
            dataset: rec[0].to_string(),
            task: rec[1].to_string(),
            variant: rec[2].to_string(),
            k: rec[3].parse().map_err(|_| bad("bad k"))?,
            status,
            iterations: if rec[5].is_empty() {
                None
            } else {
                Some(rec[5].parse().map_err(|_| bad("bad iterations"))?)
            },
            build_seconds: split(&rec[8])?,
            run_seconds: split(&rec[9])?,
        });
    }
    Ok(BenchReport { rows })
}
