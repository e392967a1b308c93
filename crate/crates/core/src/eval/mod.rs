//! Metrics over run records: mean path length, path-length distribution and
//! per-window node activity, plus their file formats.

mod report;

use std::collections::BTreeMap;
use std::io;
use std::path::PathBuf;

use serde::Serialize;
use thiserror::Error;

pub use report::{
    write_activity_csv, write_histogram_csv, write_summary_csv, write_summary_json, SummaryJson, SummaryRow,
};

use crate::demand::Trace;
use crate::online::RunRecord;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("warmup of {warmup} leaves none of the {requests} requests")]
    EmptyRemainder { warmup: usize, requests: usize },
    #[error("activity window must be at least 1 request")]
    ZeroWindow,
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{}: {source}", path.display())]
    Csv { path: PathBuf, source: csv::Error },
}

fn included(r: &RunRecord, warmup: usize) -> Result<&[u32], EvalError> {
    match r.costs.get(warmup..) {
        Some(rest) if !rest.is_empty() => Ok(rest),
        _ => Err(EvalError::EmptyRemainder { warmup, requests: r.costs.len() }),
    }
}

/// Mean cost of the requests after the first `warmup`.
pub fn apl(r: &RunRecord, warmup: usize) -> Result<f64, EvalError> {
    let rest = included(r, warmup)?;
    // Integer sum: exact for any realistic trace length.
    let total: u64 = rest.iter().map(|&c| u64::from(c)).sum();
    Ok(total as f64 / rest.len() as f64)
}

/// Empirical distribution of served path lengths.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PathLengths {
    /// `(hops, count)` in increasing hop order, zero counts omitted.
    pub histogram: Vec<(u32, u64)>,
    pub total: u64,
}

impl PathLengths {
    /// Fraction of requests served within `hops` hops.
    pub fn cdf(&self, hops: u32) -> f64 {
        let within: u64 = self.histogram.iter().take_while(|(h, _)| *h <= hops).map(|(_, c)| c).sum();
        within as f64 / self.total as f64
    }

    /// `(hops, cdf)` at every observed hop count; the last value is 1.
    pub fn points(&self) -> Vec<(u32, f64)> {
        let mut acc = 0;
        self.histogram
            .iter()
            .map(|&(h, c)| {
                acc += c;
                (h, acc as f64 / self.total as f64)
            })
            .collect()
    }
}

pub fn path_length_distribution(r: &RunRecord, warmup: usize) -> Result<PathLengths, EvalError> {
    let rest = included(r, warmup)?;
    let mut counts: BTreeMap<u32, u64> = BTreeMap::new();
    for &c in rest {
        *counts.entry(c).or_default() += 1;
    }
    Ok(PathLengths { histogram: counts.into_iter().collect(), total: rest.len() as u64 })
}

/// Five-number summary with linearly interpolated quartiles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

impl Summary {
    pub fn of(values: &[usize]) -> Option<Summary> {
        if values.is_empty() {
            return None;
        }
        let mut v: Vec<f64> = values.iter().map(|&x| x as f64).collect();
        v.sort_by(f64::total_cmp);
        let q = |p: f64| {
            let pos = p * (v.len() - 1) as f64;
            let (lo, hi) = (pos.floor() as usize, pos.ceil() as usize);
            v[lo] + (v[hi] - v[lo]) * (pos - lo as f64)
        };
        Some(Summary { min: v[0], q1: q(0.25), median: q(0.5), q3: q(0.75), max: v[v.len() - 1] })
    }
}

/// Busiest-node load per update window.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WindowActivity {
    pub window: usize,
    /// For each complete window, the largest number of requests any single
    /// node sends plus receives.
    pub series: Vec<usize>,
    pub summary: Option<Summary>,
}

/// Tumbling windows of `window` requests; a trailing partial window is
/// not reported.
pub fn window_activity(t: &Trace, window: usize) -> Result<WindowActivity, EvalError> {
    if window == 0 {
        return Err(EvalError::ZeroWindow);
    }
    let mut load = vec![0usize; t.n()];
    let series: Vec<usize> = t
        .requests()
        .chunks_exact(window)
        .map(|chunk| {
            load.iter_mut().for_each(|l| *l = 0);
            for r in chunk {
                load[r.source] += 1;
                load[r.destination] += 1;
            }
            load.iter().copied().max().unwrap_or(0)
        })
        .collect();
    let summary = Summary::of(&series);
    Ok(WindowActivity { window, series, summary })
}
