use std::collections::HashMap;
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::ops::Range;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use super::{DemandError, Trace};
use crate::graph::Node;

/// One positive-probability directed pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DemandEntry {
    pub source: Node,
    pub destination: Node,
    pub probability: f64,
}

/// Empirical distribution over directed pairs.
///
/// Entries are kept sorted by `(source, destination)`; every probability is
/// positive and they sum to one.
#[derive(Debug, Clone, PartialEq)]
pub struct DemandMatrix {
    entries: Vec<DemandEntry>,
}

const SUM_TOLERANCE: f64 = 1e-9;

impl DemandMatrix {
    /// Normalize non-negative weights. Zero weights are dropped.
    pub fn from_weights<I>(weights: I) -> Result<Self, DemandError>
    where
        I: IntoIterator<Item = ((Node, Node), f64)>,
    {
        let mut merged: HashMap<(Node, Node), f64> = HashMap::new();
        for ((u, v), w) in weights {
            if u == v {
                return Err(DemandError::SelfLoopDemand(u));
            }
            if !(w >= 0.0 && w.is_finite()) {
                return Err(DemandError::BadWeight { src: u, dst: v, weight: w });
            }
            if w > 0.0 {
                *merged.entry((u, v)).or_default() += w;
            }
        }
        let mut pairs: Vec<_> = merged.into_iter().collect();
        if pairs.is_empty() {
            return Err(DemandError::EmptyDemand);
        }
        pairs.sort_unstable_by_key(|&(p, _)| p);
        let total: f64 = pairs.iter().map(|&(_, w)| w).sum();
        let entries = pairs
            .into_iter()
            .map(|((source, destination), w)| DemandEntry { source, destination, probability: w / total })
            .collect();
        Ok(DemandMatrix { entries })
    }

    /// Integer counts divided by their total.
    pub fn from_counts<I>(counts: I) -> Result<Self, DemandError>
    where
        I: IntoIterator<Item = ((Node, Node), u64)>,
    {
        let mut merged: HashMap<(Node, Node), u64> = HashMap::new();
        for ((u, v), c) in counts {
            if u == v {
                return Err(DemandError::SelfLoopDemand(u));
            }
            *merged.entry((u, v)).or_default() += c;
        }
        let total: u64 = merged.values().sum();
        if total == 0 {
            return Err(DemandError::EmptyDemand);
        }
        let mut entries: Vec<_> = merged
            .into_iter()
            .filter(|&(_, c)| c > 0)
            .map(|((source, destination), c)| DemandEntry { source, destination, probability: c as f64 / total as f64 })
            .collect();
        entries.sort_unstable_by_key(|e| (e.source, e.destination));
        Ok(DemandMatrix { entries })
    }

    /// Empirical distribution of the requests in `window`:
    /// `p(u, v) = count(u, v) / window length`.
    pub fn from_window(trace: &Trace, window: Range<usize>) -> Result<Self, DemandError> {
        if window.start >= window.end {
            return Err(DemandError::EmptyWindow { start: window.start, end: window.end });
        }
        if window.end > trace.len() {
            return Err(DemandError::WindowOutOfRange { end: window.end, len: trace.len() });
        }
        let mut counts: HashMap<(Node, Node), u64> = HashMap::new();
        for r in &trace.requests()[window] {
            *counts.entry(r.pair()).or_default() += 1;
        }
        DemandMatrix::from_counts(counts)
    }

    /// Demand of the whole trace.
    pub fn from_trace(trace: &Trace) -> Result<Self, DemandError> {
        DemandMatrix::from_window(trace, 0..trace.len())
    }

    pub fn entries(&self) -> &[DemandEntry] {
        &self.entries
    }

    /// Number of pairs with positive probability.
    pub fn support(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, u: Node, v: Node) -> f64 {
        self.entries
            .binary_search_by_key(&(u, v), |e| (e.source, e.destination))
            .map_or(0.0, |i| self.entries[i].probability)
    }

    /// Largest node id referenced, plus one.
    pub fn node_bound(&self) -> usize {
        self.entries.iter().map(|e| e.source.max(e.destination) + 1).max().unwrap_or(0)
    }

    pub fn total(&self) -> f64 {
        self.entries.iter().map(|e| e.probability).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.total() - 1.0).abs() <= SUM_TOLERANCE
    }

    /// Entries by non-increasing probability; ties in random order.
    pub fn sorted_requests<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<DemandEntry> {
        let mut out = self.entries.clone();
        out.shuffle(rng);
        // Stable, so the shuffle decides the order within equal runs.
        out.sort_by(|a, b| b.probability.total_cmp(&a.probability));
        out
    }

    /// Shannon entropy of the pair distribution in base `k`.
    pub fn entropy(&self, k: usize) -> Result<f64, DemandError> {
        if k < 2 {
            return Err(DemandError::EntropyBase(k));
        }
        let nats: f64 =
            self.entries.iter().filter(|e| e.probability > 0.0).map(|e| -e.probability * e.probability.ln()).sum();
        Ok((nats / (k as f64).ln()).max(0.0))
    }

    /// Text form: `SRC DST PROBABILITY` per line.
    pub fn write<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "# src dst probability")?;
        for e in &self.entries {
            writeln!(w, "{} {} {}", e.source, e.destination, e.probability)?;
        }
        w.flush()
    }

    pub fn save(&self, path: &Path) -> Result<(), DemandError> {
        let file = File::create(path).map_err(|e| DemandError::io(path, e))?;
        self.write(BufWriter::new(file)).map_err(|e| DemandError::io(path, e))
    }

    pub fn read<R: BufRead>(reader: R) -> Result<Self, DemandError> {
        let mut weights = Vec::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            let body = line.trim();
            if body.is_empty() || body.starts_with('#') {
                continue;
            }
            let f: Vec<&str> = body.split(|c: char| c == ',' || c.is_whitespace()).filter(|f| !f.is_empty()).collect();
            let bad = |reason: String| DemandError::Malformed { line: i + 1, reason };
            if f.len() != 3 {
                return Err(bad(format!("expected 3 fields, found {}", f.len())));
            }
            let u: Node = f[0].parse().map_err(|_| bad(format!("{:?} is not a node id", f[0])))?;
            let v: Node = f[1].parse().map_err(|_| bad(format!("{:?} is not a node id", f[1])))?;
            let p: f64 = f[2].parse().map_err(|_| bad(format!("{:?} is not a number", f[2])))?;
            weights.push(((u, v), p));
        }
        DemandMatrix::from_weights(weights)
    }

    pub fn load(path: &Path) -> Result<Self, DemandError> {
        let file = File::open(path).map_err(|e| DemandError::io(path, e))?;
        DemandMatrix::read(BufReader::new(file))
    }
}
