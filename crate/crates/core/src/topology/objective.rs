//! The weighted distance objective and its closed form on star demands.

use std::collections::BTreeMap;

use super::{check_demand_range, TopologyError};
use crate::demand::DemandMatrix;
use crate::graph::{Bfs, Direction, Network, Node};

/// `sum p(u, v) * dist(u, v)` over the demand support.
pub fn weighted_apl(g: &Network, d: &DemandMatrix) -> Result<f64, TopologyError> {
    check_demand_range(d, g.n())?;
    let mut bfs = Bfs::new(g.n());
    let mut row = Vec::new();
    let mut row_source = None;
    let mut total = 0.0;
    // Entries are sorted by pair, so each source's BFS runs once.
    for e in d.entries() {
        if row_source != Some(e.source) {
            row = bfs.distances(g, e.source, Direction::Forward);
            row_source = Some(e.source);
        }
        let h = row[e.destination].finite().ok_or(TopologyError::Unreachable(e.source, e.destination))?;
        total += e.probability * f64::from(h);
    }
    Ok(total)
}

/// Depth of the `j`-th slot (0-based, breadth-first) below the root of a
/// complete k-ary tree.
fn kary_depth(j: usize, k: usize) -> u32 {
    let (mut depth, mut level, mut filled) = (1u32, k, 0usize);
    while j >= filled + level {
        filled += level;
        level = level.saturating_mul(k);
        depth += 1;
    }
    depth
}

/// Minimum of the weighted objective when the demand graph is a disjoint
/// union of stars, each pointing entirely out of or into its centre.
///
/// Each star is laid out as a complete k-ary tree below its centre with
/// heavier members nearer the root; no k-bounded network does better since
/// at most `k^i` nodes lie within `i` hops of the centre.
pub fn star_optimal_apl(d: &DemandMatrix, k: usize) -> Result<f64, TopologyError> {
    if k == 0 {
        return Err(crate::graph::GraphError::ZeroDegree.into());
    }
    let mut total = 0.0;
    for mut weights in star_weights(d)? {
        weights.sort_by(|a, b| b.total_cmp(a));
        total += weights.iter().enumerate().map(|(j, w)| w * f64::from(kary_depth(j, k))).sum::<f64>();
    }
    Ok(total)
}

/// Member weights per star, after checking the star shape.
fn star_weights(d: &DemandMatrix) -> Result<Vec<Vec<f64>>, TopologyError> {
    let n = d.node_bound();
    let mut parent: Vec<Node> = (0..n).collect();
    fn find(p: &mut [Node], mut x: Node) -> Node {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for e in d.entries() {
        let (a, b) = (find(&mut parent, e.source), find(&mut parent, e.destination));
        parent[a] = b;
    }
    let mut comps: BTreeMap<Node, Vec<(Node, Node, f64)>> = BTreeMap::new();
    for e in d.entries() {
        let root = find(&mut parent, e.source);
        comps.entry(root).or_default().push((e.source, e.destination, e.probability));
    }
    comps
        .into_values()
        .map(|edges| {
            let (s0, d0, _) = edges[0];
            let out_star = edges.iter().all(|&(s, _, _)| s == s0);
            let in_star = edges.iter().all(|&(_, t, _)| t == d0);
            if out_star || in_star {
                Ok(edges.into_iter().map(|(_, _, w)| w).collect())
            } else {
                Err(TopologyError::NotStars(format!(
                    "component containing ({s0}, {d0}) has no single source or destination"
                )))
            }
        })
        .collect()
}
