//! Report files. Column order and number formatting are fixed so reruns
//! with the same inputs are byte-identical.

use std::fs;
use std::path::Path;

use serde::Serialize;

use super::{apl, EvalError, PathLengths, WindowActivity};
use crate::online::RunRecord;

pub const SUMMARY_HEADER: [&str; 12] =
    ["algo", "trace", "n", "k", "R", "W", "seed", "requests", "warmup", "apl", "apl_no_warmup", "reconfigs"];

/// One line of the summary table. `apl` excludes the warmup requests,
/// `apl_no_warmup` averages over all of them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub algo: String,
    pub trace: String,
    pub n: usize,
    pub k: usize,
    #[serde(rename = "R")]
    pub rate: String,
    #[serde(rename = "W")]
    pub window: usize,
    pub seed: u64,
    pub requests: usize,
    pub warmup: usize,
    pub apl: f64,
    pub apl_no_warmup: f64,
    pub reconfigs: usize,
}

impl SummaryRow {
    pub fn new(r: &RunRecord, trace: &str, warmup: usize) -> Result<Self, EvalError> {
        let c = &r.config;
        Ok(SummaryRow {
            algo: c.algorithm.to_string(),
            trace: trace.to_string(),
            n: c.n,
            k: c.k,
            rate: c.rate.to_string(),
            window: c.window,
            seed: c.seed,
            requests: r.requests(),
            warmup,
            apl: apl(r, warmup)?,
            apl_no_warmup: apl(r, 0)?,
            reconfigs: r.reconfigs(),
        })
    }
}

/// Per-run JSON summary.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryJson {
    pub algo: String,
    pub trace: String,
    pub n: usize,
    pub k: usize,
    #[serde(rename = "R")]
    pub rate: String,
    #[serde(rename = "W")]
    pub window: usize,
    pub seed: u64,
    /// Over all requests.
    pub apl: f64,
    pub apl_after_warmup: f64,
    pub warmup: usize,
    pub requests: usize,
    pub reconfigs: usize,
    /// Set for policies whose internals are our own reconstruction.
    pub reconstructed: bool,
}

impl SummaryJson {
    pub fn new(row: &SummaryRow, reconstructed: bool) -> Self {
        SummaryJson {
            algo: row.algo.clone(),
            trace: row.trace.clone(),
            n: row.n,
            k: row.k,
            rate: row.rate.clone(),
            window: row.window,
            seed: row.seed,
            apl: row.apl_no_warmup,
            apl_after_warmup: row.apl,
            warmup: row.warmup,
            requests: row.requests,
            reconfigs: row.reconfigs,
            reconstructed,
        }
    }
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>, EvalError> {
    csv::WriterBuilder::new()
        .has_headers(false)
        .from_path(path)
        .map_err(|source| EvalError::Csv { path: path.to_path_buf(), source })
}

fn write_csv<I, R>(path: &Path, header: &[&str], rows: I) -> Result<(), EvalError>
where
    I: IntoIterator<Item = R>,
    R: Serialize,
{
    let wrap = |source| EvalError::Csv { path: path.to_path_buf(), source };
    let mut w = csv_writer(path)?;
    w.write_record(header).map_err(wrap)?;
    for row in rows {
        w.serialize(row).map_err(wrap)?;
    }
    w.flush().map_err(|source| EvalError::Io { path: path.to_path_buf(), source })
}

pub fn write_summary_csv(path: &Path, rows: &[SummaryRow]) -> Result<(), EvalError> {
    write_csv(path, &SUMMARY_HEADER, rows)
}

pub fn write_histogram_csv(path: &Path, d: &PathLengths) -> Result<(), EvalError> {
    write_csv(path, &["hops", "count"], &d.histogram)
}

pub fn write_activity_csv(path: &Path, a: &WindowActivity) -> Result<(), EvalError> {
    write_csv(path, &["window_index", "max_activity"], a.series.iter().enumerate())
}

pub fn write_summary_json(path: &Path, s: &SummaryJson) -> Result<(), EvalError> {
    let mut text = serde_json::to_string_pretty(s).expect("summary serializes");
    text.push('\n');
    fs::write(path, text).map_err(|source| EvalError::Io { path: path.to_path_buf(), source })
}
