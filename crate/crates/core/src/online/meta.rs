//! The periodic rebuild loop and the static baselines.

use std::cmp::Ordering;

use super::{DistanceCache, OnlineConfig, OnlineError, ReconfigEvent, RunRecord};
use crate::demand::{DemandMatrix, Trace};
use crate::graph::{Network, Node};
use crate::seed::{derive, Stream};
use crate::topology::{greedy_ego_trees, greedy_matching, random_expander, BuildOutcome, TopologyError};

/// Builds the next network from the demand of the recent window.
pub trait Update {
    fn build(&self, window: &DemandMatrix, n: usize, k: usize, seed: u64) -> Result<BuildOutcome, TopologyError>;
}

pub struct EgoTreesUpdate;

impl Update for EgoTreesUpdate {
    fn build(&self, window: &DemandMatrix, n: usize, k: usize, seed: u64) -> Result<BuildOutcome, TopologyError> {
        greedy_ego_trees(window, n, k, seed)
    }
}

pub struct KMatchingUpdate;

impl Update for KMatchingUpdate {
    fn build(&self, window: &DemandMatrix, n: usize, k: usize, seed: u64) -> Result<BuildOutcome, TopologyError> {
        greedy_matching(window, n, k, seed)
    }
}

pub fn egotrees_update(window: &DemandMatrix, n: usize, k: usize, seed: u64) -> Result<Network, TopologyError> {
    EgoTreesUpdate.build(window, n, k, seed).map(|o| o.network)
}

pub fn kmatching_update(window: &DemandMatrix, n: usize, k: usize, seed: u64) -> Result<Network, TopologyError> {
    KMatchingUpdate.build(window, n, k, seed).map(|o| o.network)
}

/// The network every run starts from: the seeded random expander. The
/// expander baseline and the cache policy's backbone are this same network.
pub fn initial_network(cfg: &OnlineConfig) -> Result<Network, TopologyError> {
    let seed = derive(cfg.seed, Stream::Initial, 0);
    random_expander(cfg.n, cfg.k, cfg.expander_trials, seed).map(|o| o.network)
}

/// Ego trees from the demand of the entire trace.
pub fn static_egotrees(trace: &Trace, cfg: &OnlineConfig) -> Result<Network, OnlineError> {
    let d = DemandMatrix::from_trace(trace)?;
    Ok(greedy_ego_trees(&d, cfg.n, cfg.k, derive(cfg.seed, Stream::Update, 0))?.network)
}

/// Serve request `t` on `N(t)`; after every request with `t % R == 0`,
/// replace the network by `update` applied to the last `min(W, t)`
/// requests. The replacement is used from request `t + 1` on.
pub fn run_meta(trace: &Trace, cfg: &OnlineConfig, update: &dyn Update) -> Result<RunRecord, OnlineError> {
    cfg.validate()?;
    let mut g = initial_network(cfg)?;
    let mut cache = DistanceCache::new(cfg.n);
    let mut costs = Vec::with_capacity(trace.len());
    let mut events = Vec::new();
    for (i, r) in trace.requests().iter().enumerate() {
        let t = i + 1;
        costs.push(serve(&mut cache, &g, r.source, r.destination)?);
        if !cfg.rate.fires_at(t) {
            continue;
        }
        let window = DemandMatrix::from_window(trace, trace.window_ending_at(t, cfg.window))?;
        let next = update.build(&window, cfg.n, cfg.k, derive(cfg.seed, Stream::Update, t as u64))?;
        if let Err(e) = next.verify() {
            return Err(OnlineError::Incomplete { t, reason: e.to_string() });
        }
        let (added, removed) = edge_difference(&g, &next.network);
        events.push(ReconfigEvent { t, added, removed });
        g = next.network;
        cache.invalidate();
    }
    Ok(RunRecord { config: cfg.clone(), costs, events })
}

/// Serve every request on the fixed network `g`.
pub fn run_static(trace: &Trace, cfg: &OnlineConfig, g: &Network) -> Result<RunRecord, OnlineError> {
    let mut cache = DistanceCache::new(g.n());
    let costs =
        trace.requests().iter().map(|r| serve(&mut cache, g, r.source, r.destination)).collect::<Result<_, _>>()?;
    Ok(RunRecord { config: cfg.clone(), costs, events: Vec::new() })
}

fn serve(cache: &mut DistanceCache, g: &Network, s: Node, d: Node) -> Result<u32, OnlineError> {
    cache.dist(g, s, d).finite().ok_or(OnlineError::Unreachable(s, d))
}

/// Edges only in `new`, and edges only in `old`, as multisets.
pub(crate) fn edge_difference(old: &Network, new: &Network) -> (usize, usize) {
    let (a, b) = (old.sorted_edges(), new.sorted_edges());
    let (mut i, mut j, mut common) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => i += 1,
            Ordering::Greater => j += 1,
            Ordering::Equal => {
                common += 1;
                i += 1;
                j += 1;
            }
        }
    }
    (b.len() - common, a.len() - common)
}
