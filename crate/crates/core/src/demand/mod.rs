//! Traces, windowed demand estimation, entropy and synthetic workloads.

mod generate;
mod matrix;
mod stats;
mod trace;

use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

pub use generate::{
    generate_forest_demand, generate_star_demand, generate_stars, generate_uniform_pairs, generate_zipf_pairs,
    StarsShape,
};
pub use matrix::{DemandEntry, DemandMatrix};
pub use stats::{trace_stats, TraceStats};
pub use trace::{Request, Trace};

use crate::graph::Node;

#[derive(Debug, Error)]
pub enum DemandError {
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("line {line}: node {node} is out of range 0..{n}")]
    NodeOutOfRange { line: usize, node: Node, n: usize },
    #[error("empty window {start}..{end}")]
    EmptyWindow { start: usize, end: usize },
    #[error("window ends at {end} but the trace has {len} requests")]
    WindowOutOfRange { end: usize, len: usize },
    #[error("demand has no positive entries")]
    EmptyDemand,
    #[error("demand pair ({0}, {0}) is a self-loop")]
    SelfLoopDemand(Node),
    #[error("weight {weight} for ({src}, {dst}) is not a finite non-negative number")]
    BadWeight { src: Node, dst: Node, weight: f64 },
    #[error("entropy base must be at least 2, got {0}")]
    EntropyBase(usize),
    #[error("generator: {0}")]
    Generator(String),
    #[error("{}: {source}", path.display())]
    File { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl DemandError {
    pub(crate) fn io(path: &Path, source: io::Error) -> Self {
        DemandError::File { path: path.to_path_buf(), source }
    }
}
