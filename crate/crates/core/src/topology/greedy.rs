//! The two greedy demand-aware constructors.

use super::repair::EdgeWeights;
use super::{check_demand_range, finish, Admission, BuildOutcome, TopologyError};
use crate::demand::DemandMatrix;
use crate::graph::{Bfs, Direction, Network};
use crate::seed::{rng, Stream};

/// Heaviest pairs first, each inserted as a direct edge while both of its
/// endpoints still have a free slot. The greedy-phase network is therefore
/// a subgraph of the demand graph.
pub fn greedy_matching(d: &DemandMatrix, n: usize, k: usize, seed: u64) -> Result<BuildOutcome, TopologyError> {
    let mut g = Network::new(n, k)?;
    check_demand_range(d, n)?;
    let mut weights = EdgeWeights::new();
    let mut admitted = Vec::new();
    for e in d.sorted_requests(&mut rng(seed, Stream::Sort, 0)) {
        let pair = (e.source, e.destination);
        if g.out_degree(pair.0) < k && g.in_degree(pair.1) < k {
            g.add_edge(pair.0, pair.1)?;
            weights.set(pair, e.probability);
            admitted.push(Admission { pair, edge: pair });
        }
    }
    let outcome = finish(g, admitted, &weights, seed)?;
    for a in outcome.admitted.iter() {
        assert!(outcome.network.has_edge(a.pair.0, a.pair.1), "admitted pair {:?} lost its edge", a.pair);
    }
    Ok(outcome)
}

/// Heaviest pairs first. For `(s, d)`, join the closest node `x` reachable
/// from `s` that has a free out-slot to the closest node `y` reaching `d`
/// that has a free in-slot, provided that shortens `s -> d`. Star demands
/// grow into complete k-ary trees ordered by weight.
pub fn greedy_ego_trees(d: &DemandMatrix, n: usize, k: usize, seed: u64) -> Result<BuildOutcome, TopologyError> {
    let mut g = Network::new(n, k)?;
    check_demand_range(d, n)?;
    let mut ties = rng(seed, Stream::BfsTies, 0);
    let mut bfs = Bfs::new(n);
    let mut weights = EdgeWeights::new();
    let mut admitted = Vec::new();
    for e in d.sorted_requests(&mut rng(seed, Stream::Sort, 0)) {
        if g.edge_count() == g.capacity() {
            break;
        }
        let (s, t) = (e.source, e.destination);
        let Some((x, dx)) = bfs.nearest_available(&g, s, Direction::Forward, &mut ties) else {
            continue;
        };
        let Some((y, dy)) = bfs.nearest_available(&g, t, Direction::Backward, &mut ties) else {
            continue;
        };
        if x == y || g.has_edge(x, y) {
            continue;
        }
        // Improves iff dist(s, t) > dx + dy + 1, i.e. not reachable within that bound.
        let via = dx + dy + 1;
        if bfs.distance_within(&g, s, t, via).is_some() {
            continue;
        }
        g.add_edge(x, y)?;
        debug_assert!(bfs.distance(&g, s, t).finite() == Some(via));
        weights.set((x, y), e.probability);
        admitted.push(Admission { pair: (s, t), edge: (x, y) });
    }
    finish(g, admitted, &weights, seed)
}
