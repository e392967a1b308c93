//! Static network constructors and the weighted path-length objective.
//!
//! Both greedy constructors share the same tail: whatever the greedy phase
//! leaves behind is repaired into a k-regular, strongly connected network
//! and then split into `k` spine matchings.

mod expander;
mod greedy;
mod objective;
mod repair;

use serde::Serialize;
use thiserror::Error;

pub use expander::{random_expander, DEFAULT_EXPANDER_TRIALS};
pub use greedy::{greedy_ego_trees, greedy_matching};
pub use objective::{star_optimal_apl, weighted_apl};
pub use repair::{repair, EdgeWeights, RepairAction};

use crate::demand::DemandMatrix;
use crate::graph::{decompose_to_matchings, union_of_matchings, GraphError, MatchingSet, Network, Node};
use crate::seed::{rng, Stream};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TopologyError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("demand pair ({0}, {1}) is unreachable in the network")]
    Unreachable(Node, Node),
    #[error("demand references node {node} but the network has {n} nodes")]
    DemandOutOfRange { node: Node, n: usize },
    #[error("demand is not a collection of disjoint stars: {0}")]
    NotStars(String),
    #[error("repair could not make progress ({0})")]
    RepairStuck(String),
    #[error("no strongly connected expander found after {attempts} candidates")]
    NoExpander { attempts: usize },
    #[error("expander needs at least one trial")]
    ZeroTrials,
}

/// A deployable network together with how it was obtained.
#[derive(Debug, Clone)]
pub struct BuildOutcome {
    /// k-regular, strongly connected.
    pub network: Network,
    /// `network` split into one matching per spine switch.
    pub matchings: MatchingSet,
    /// Network as it stood when the greedy phase ended, before repair.
    pub greedy_network: Network,
    /// Greedy-phase insertions whose edge is part of `network`, in order.
    pub admitted: Vec<Admission>,
    /// Greedy-phase insertions whose edge repair had to rewire away.
    pub displaced: Vec<Admission>,
    /// Edges added by the fill step.
    pub fill_edges: usize,
    pub repair_log: Vec<RepairAction>,
}

/// One greedy-phase insertion: the edge placed on behalf of a demand pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Admission {
    pub pair: (Node, Node),
    pub edge: (Node, Node),
}

impl BuildOutcome {
    /// Structural check run on every build: regular, strongly connected,
    /// and identical to the union of its matchings.
    pub fn verify(&self) -> Result<(), TopologyError> {
        self.network.check_regular()?;
        if !self.network.is_strongly_connected() {
            return Err(TopologyError::RepairStuck("network is not strongly connected".into()));
        }
        if !union_of_matchings(&self.matchings).same_edges(&self.network) {
            return Err(TopologyError::RepairStuck("matchings do not reproduce the network".into()));
        }
        Ok(())
    }

    /// JSON array of repair actions.
    pub fn repair_log_json(&self) -> String {
        serde_json::to_string_pretty(&self.repair_log).expect("repair log serializes")
    }
}

fn check_demand_range(d: &DemandMatrix, n: usize) -> Result<(), TopologyError> {
    match d.entries().iter().map(|e| e.source.max(e.destination)).find(|&v| v >= n) {
        Some(node) => Err(TopologyError::DemandOutOfRange { node, n }),
        None => Ok(()),
    }
}

/// Repair the greedy-phase network, decompose it and verify the result.
fn finish(
    greedy_network: Network,
    inserted: Vec<Admission>,
    weights: &EdgeWeights,
    seed: u64,
) -> Result<BuildOutcome, TopologyError> {
    let mut network = greedy_network.clone();
    let repair_log = repair(&mut network, weights, &mut rng(seed, Stream::Fill, 0))?;
    let matchings = decompose_to_matchings(&network)?;
    let fill_edges = repair_log.iter().filter(|a| matches!(a, RepairAction::Fill { .. })).count();
    // Greedy edges are simple, so presence decides survival.
    let (admitted, displaced) = inserted.into_iter().partition(|a| network.has_edge(a.edge.0, a.edge.1));
    let outcome = BuildOutcome { network, matchings, greedy_network, admitted, displaced, fill_edges, repair_log };
    outcome.verify()?;
    Ok(outcome)
}

/// Standalone repair of `g`, sacrificing edges with the least demand first.
pub fn repair_network(g: &Network, d: &DemandMatrix, seed: u64) -> Result<(Network, Vec<RepairAction>), TopologyError> {
    let mut weights = EdgeWeights::new();
    for (u, v) in g.edges() {
        weights.set((u, v), d.get(u, v));
    }
    let mut out = g.clone();
    let log = repair(&mut out, &weights, &mut rng(seed, Stream::Fill, 0))?;
    Ok((out, log))
}
