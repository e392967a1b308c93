//! Completing a partial network: fill free degree slots, then merge
//! strongly connected components with degree-preserving swaps.

use std::collections::HashMap;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;
use serde::Serialize;

use super::TopologyError;
use crate::graph::{strongly_connected_components, Network, Node};

/// Random fill picks tried before scanning every deficient pair.
const FILL_ATTEMPTS: usize = 32;

pub type Edge = (Node, Node);

/// One step taken by [`repair`], in execution order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "action", rename_all = "snake_case")]
pub enum RepairAction {
    /// A new simple edge between two deficient nodes.
    Fill { edge: Edge },
    /// `removed = (a, b)` became `(a, v)` and `(u, b)` for deficient `u`, `v`.
    Swap { removed: Edge, added: [Edge; 2] },
    /// No simple fill or unweighted swap existed; a parallel copy was inserted.
    Parallel { edge: Edge },
    /// Two components joined by exchanging one internal edge of each.
    Merge { removed: [Edge; 2], added: [Edge; 2] },
}

/// Edge weights used to decide which edges repair sacrifices first.
/// Absent edges weigh 0.
#[derive(Debug, Clone, Default)]
pub struct EdgeWeights(HashMap<Edge, f64>);

impl EdgeWeights {
    pub fn new() -> Self {
        Self::default()
    }

    /// Keeps the larger weight when an edge is set twice.
    pub fn set(&mut self, edge: Edge, w: f64) {
        let slot = self.0.entry(edge).or_insert(w);
        *slot = slot.max(w);
    }

    pub fn get(&self, edge: Edge) -> f64 {
        self.0.get(&edge).copied().unwrap_or(0.0)
    }
}

/// Make `g` k-regular and strongly connected, returning what was done.
///
/// Fill: while a node has a free out-slot, join a random out-deficient `u`
/// to a random in-deficient `v` (`u != v`, edge absent). If no such pair
/// exists, replace a zero-weight edge `(a, b)` by `(a, v)` and `(u, b)`,
/// else admit a parallel `(u, v)`. A weighted edge is split only when the
/// sole deficient node is `u` itself, which no parallel edge can serve.
///
/// Connect: while more than one component remains, pick a sink component
/// and a source component, take the lowest-weight internal edge of each,
/// `(u1, v1)` and `(u2, v2)`, and rewire them to `(u1, v2)` and `(u2, v1)`.
/// Every node of either component still reaches its own `u` and is reached
/// from its own `v`, so the two merge; degrees are unchanged.
pub fn repair<R: Rng + ?Sized>(
    g: &mut Network,
    weights: &EdgeWeights,
    rng: &mut R,
) -> Result<Vec<RepairAction>, TopologyError> {
    let mut log = Vec::new();
    fill(g, weights, rng, &mut log)?;
    connect(g, weights, rng, &mut log)?;
    Ok(log)
}

fn fill<R: Rng + ?Sized>(
    g: &mut Network,
    weights: &EdgeWeights,
    rng: &mut R,
    log: &mut Vec<RepairAction>,
) -> Result<(), TopologyError> {
    let k = g.k();
    loop {
        let outs: Vec<Node> = (0..g.n()).filter(|&v| g.out_degree(v) < k).collect();
        if outs.is_empty() {
            return Ok(());
        }
        let ins: Vec<Node> = (0..g.n()).filter(|&v| g.in_degree(v) < k).collect();
        let fits = |u: Node, v: Node| u != v && !g.has_edge(u, v);

        let mut pick = (0..FILL_ATTEMPTS)
            .map(|_| (*outs.choose(rng).unwrap(), *ins.choose(rng).unwrap()))
            .find(|&(u, v)| fits(u, v));
        if pick.is_none() {
            let mut all: Vec<Edge> =
                outs.iter().flat_map(|&u| ins.iter().map(move |&v| (u, v))).filter(|&(u, v)| fits(u, v)).collect();
            all.shuffle(rng);
            pick = all.first().copied();
        }
        if let Some((u, v)) = pick {
            g.add_edge(u, v)?;
            log.push(RepairAction::Fill { edge: (u, v) });
            continue;
        }

        // Every deficient pair with `u != v` already has an edge.
        let distinct: Vec<Edge> =
            outs.iter().flat_map(|&u| ins.iter().map(move |&v| (u, v))).filter(|&(u, v)| u != v).collect();
        let (u, v) = match distinct.choose(rng) {
            Some(&e) => e,
            None => (outs[0], outs[0]),
        };
        if let Some(action) = swap_in(g, weights, u, v, true, rng)? {
            log.push(action);
            continue;
        }
        if u != v {
            g.add_edge(u, v)?;
            log.push(RepairAction::Parallel { edge: (u, v) });
            continue;
        }
        match swap_in(g, weights, u, v, false, rng)? {
            Some(action) => log.push(action),
            None => {
                return Err(TopologyError::RepairStuck(format!(
                    "node {u} is the only deficient node and no edge can be split"
                )))
            }
        }
    }
}

/// Replace an existing `(a, b)` by `(a, v)` and `(u, b)`, preferring new
/// edges that are not already present, then the lowest-weight `(a, b)`.
/// With `unweighted_only`, edges of positive weight are never removed.
fn swap_in<R: Rng + ?Sized>(
    g: &mut Network,
    weights: &EdgeWeights,
    u: Node,
    v: Node,
    unweighted_only: bool,
    rng: &mut R,
) -> Result<Option<RepairAction>, TopologyError> {
    let legal =
        |&(a, b): &Edge| a != v && b != u && (a, b) != (u, v) && !(unweighted_only && weights.get((a, b)) > 0.0);
    let simple = |&(a, b): &Edge| !g.has_edge(a, v) && !g.has_edge(u, b) && (a, v) != (u, b);
    let mut candidates: Vec<Edge> = g.edges().filter(legal).filter(simple).collect();
    if candidates.is_empty() && u == v {
        // Splitting an edge through `u` is the only way to use its slots.
        candidates = g.edges().filter(legal).collect();
    }
    let Some((a, b)) = lightest(&candidates, weights, rng) else {
        return Ok(None);
    };
    g.remove_edge(a, b)?;
    g.add_edge(a, v)?;
    g.add_edge(u, b)?;
    Ok(Some(RepairAction::Swap { removed: (a, b), added: [(a, v), (u, b)] }))
}

/// Lowest-weight edge, uniformly among ties.
fn lightest<R: Rng + ?Sized>(edges: &[Edge], weights: &EdgeWeights, rng: &mut R) -> Option<Edge> {
    let min = edges.iter().map(|&e| weights.get(e)).min_by(f64::total_cmp)?;
    let ties: Vec<Edge> = edges.iter().copied().filter(|&e| weights.get(e) == min).collect();
    ties.choose(rng).copied()
}

fn connect<R: Rng + ?Sized>(
    g: &mut Network,
    weights: &EdgeWeights,
    rng: &mut R,
    log: &mut Vec<RepairAction>,
) -> Result<(), TopologyError> {
    loop {
        let comps = strongly_connected_components(g);
        if comps.count() <= 1 {
            return Ok(());
        }
        let sinks: Vec<usize> = (0..comps.count()).filter(|&c| comps.is_sink(c)).collect();
        let a = *sinks.choose(rng).expect("a finite DAG has a sink");
        let sources: Vec<usize> = (0..comps.count()).filter(|&c| comps.is_source(c) && c != a).collect();
        let b = match sources.choose(rng) {
            Some(&b) => b,
            // `a` is the only source, so some other component is a sink.
            None => **sinks.iter().filter(|&&c| c != a).collect::<Vec<_>>().choose(rng).unwrap(),
        };
        let internal = |c: usize| -> Vec<Edge> {
            comps
                .members(c)
                .iter()
                .flat_map(|&x| g.out_neighbors(x).iter().map(move |&y| (x, y)))
                .filter(|&(_, y)| comps.component_of(y) == c)
                .collect()
        };
        let (ea, eb) = (internal(a), internal(b));
        let ((u1, v1), (u2, v2)) = match (lightest(&ea, weights, rng), lightest(&eb, weights, rng)) {
            (Some(x), Some(y)) => (x, y),
            _ => return Err(TopologyError::RepairStuck("a source or sink component has no internal edge".into())),
        };
        g.remove_edge(u1, v1)?;
        g.remove_edge(u2, v2)?;
        g.add_edge(u1, v2)?;
        g.add_edge(u2, v1)?;
        log.push(RepairAction::Merge { removed: [(u1, v1), (u2, v2)], added: [(u1, v2), (u2, v1)] });
    }
}
