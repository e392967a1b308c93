//! Synthetic traces and demand matrices.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::SliceRandom;
use rand::Rng;

use super::{DemandError, DemandMatrix, Request, Trace};
use crate::graph::Node;
use crate::seed::{rng, Stream};

/// Disjoint stars: `stars` centres, each with `leaves` leaves.
///
/// Star `s` occupies ids `s * (leaves + 1) ..= s * (leaves + 1) + leaves`,
/// the first of which is the centre.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StarsShape {
    pub stars: usize,
    pub leaves: usize,
    /// Leaf `i` (1-based) has weight `1/i`; otherwise all leaves are equal.
    pub zipf: bool,
}

impl Default for StarsShape {
    fn default() -> Self {
        StarsShape { stars: 32, leaves: 31, zipf: true }
    }
}

impl StarsShape {
    /// Shape whose node count must equal `n`.
    pub fn with_nodes(stars: usize, leaves: usize, zipf: bool, n: usize) -> Result<Self, DemandError> {
        let shape = StarsShape { stars, leaves, zipf };
        if shape.n() != n {
            return Err(DemandError::Generator(format!(
                "{stars} stars x ({leaves} leaves + 1 centre) = {} nodes, not {n}",
                shape.n()
            )));
        }
        Ok(shape)
    }

    pub fn n(&self) -> usize {
        self.stars * (self.leaves + 1)
    }

    pub fn center(&self, star: usize) -> Node {
        star * (self.leaves + 1)
    }

    /// Leaf `i` of `star`, `1 <= i <= leaves`.
    pub fn leaf(&self, star: usize, i: usize) -> Node {
        self.center(star) + i
    }
}

/// Each request picks a star uniformly, a direction (centre to leaf or
/// back) uniformly, and leaf `i` with probability proportional to `1/i`.
pub fn generate_stars(shape: StarsShape, length: usize, seed: u64) -> Result<Trace, DemandError> {
    if shape.stars == 0 || shape.leaves == 0 {
        return Err(DemandError::Generator("stars and leaves must be positive".into()));
    }
    if length == 0 {
        return Err(DemandError::Generator("trace length must be positive".into()));
    }
    let mut r = rng(seed, Stream::Generator, 1);
    let weights: Vec<f64> = (1..=shape.leaves).map(|i| if shape.zipf { 1.0 / i as f64 } else { 1.0 }).collect();
    let leaf_dist = WeightedIndex::new(&weights).expect("positive weights");
    let requests: Vec<Request> = (0..length)
        .map(|_| {
            let star = r.random_range(0..shape.stars);
            let to_leaf = r.random_bool(0.5);
            let leaf = shape.leaf(star, leaf_dist.sample(&mut r) + 1);
            let center = shape.center(star);
            if to_leaf {
                Request::new(center, leaf)
            } else {
                Request::new(leaf, center)
            }
        })
        .collect();
    Trace::new(shape.n(), requests)
}

fn check_pairs_args(n: usize, length: usize) -> Result<(), DemandError> {
    if n < 2 {
        return Err(DemandError::Generator("need at least 2 nodes".into()));
    }
    if length == 0 {
        return Err(DemandError::Generator("trace length must be positive".into()));
    }
    Ok(())
}

/// Sources and destinations drawn uniformly, `s != d`.
pub fn generate_uniform_pairs(n: usize, length: usize, seed: u64) -> Result<Trace, DemandError> {
    check_pairs_args(n, length)?;
    let mut r = rng(seed, Stream::Generator, 2);
    let requests: Vec<Request> = (0..length)
        .map(|_| {
            let s = r.random_range(0..n);
            let d = (s + r.random_range(1..n)) % n;
            Request::new(s, d)
        })
        .collect();
    Trace::new(n, requests)
}

/// Source and destination drawn independently from a Zipf law over a
/// random ranking of the nodes; `s == d` draws are resampled.
pub fn generate_zipf_pairs(n: usize, length: usize, exponent: f64, seed: u64) -> Result<Trace, DemandError> {
    check_pairs_args(n, length)?;
    if !(exponent >= 0.0 && exponent.is_finite()) {
        return Err(DemandError::Generator(format!("bad Zipf exponent {exponent}")));
    }
    let mut r = rng(seed, Stream::Generator, 3);
    let mut src_rank: Vec<Node> = (0..n).collect();
    let mut dst_rank: Vec<Node> = (0..n).collect();
    src_rank.shuffle(&mut r);
    dst_rank.shuffle(&mut r);
    let weights: Vec<f64> = (1..=n).map(|i| (i as f64).powf(-exponent)).collect();
    let dist = WeightedIndex::new(&weights).expect("positive weights");
    let requests: Vec<Request> = (0..length)
        .map(|_| loop {
            let s = src_rank[dist.sample(&mut r)];
            let d = dst_rank[dist.sample(&mut r)];
            if s != d {
                break Request::new(s, d);
            }
        })
        .collect();
    Trace::new(n, requests)
}

/// Random directed forest demand: every node is the destination of at most
/// one pair and the undirected support is acyclic (edges point away from
/// each tree's root). No node has more than `arity` children. Weights are
/// random positive, normalized.
pub fn generate_forest_demand(n: usize, arity: usize, seed: u64) -> Result<DemandMatrix, DemandError> {
    if n < 2 {
        return Err(DemandError::Generator("need at least 2 nodes".into()));
    }
    if arity == 0 {
        return Err(DemandError::Generator("tree arity bound must be positive".into()));
    }
    let mut r = rng(seed, Stream::Generator, 4);
    let mut order: Vec<Node> = (0..n).collect();
    order.shuffle(&mut r);
    let mut children = vec![0usize; n];
    let mut open: Vec<Node> = vec![order[0]];
    let mut weights = Vec::with_capacity(n - 1);
    // Heavier tails than uniform so the sorted order matters.
    let skew = r.random_range(0.5..4.0);
    for (i, &v) in order.iter().enumerate().skip(1) {
        let new_root = i > 1 && (open.is_empty() || r.random_bool(0.1));
        if !new_root {
            let slot = r.random_range(0..open.len());
            let parent = open[slot];
            children[parent] += 1;
            if children[parent] == arity {
                open.swap_remove(slot);
            }
            let w = (1.0 - r.random::<f64>()).powf(skew);
            weights.push(((parent, v), w));
        }
        open.push(v);
    }
    DemandMatrix::from_weights(weights)
}

/// Random disjoint-star demand over `0..n`: nodes are partitioned into
/// stars of at least two members, each star pointing either out of or into
/// its centre, with integer counts in `1..=max_count`.
pub fn generate_star_demand(n: usize, max_count: u64, seed: u64) -> Result<DemandMatrix, DemandError> {
    if n < 2 {
        return Err(DemandError::Generator("need at least 2 nodes".into()));
    }
    let mut r = rng(seed, Stream::Generator, 5);
    let mut order: Vec<Node> = (0..n).collect();
    order.shuffle(&mut r);
    let mut counts = Vec::new();
    let mut rest = &order[..];
    while rest.len() >= 2 {
        let size = if rest.len() <= 3 { rest.len() } else { r.random_range(2..=rest.len().min(64)) };
        let (star, tail) = rest.split_at(size);
        rest = tail;
        let outward = r.random_bool(0.5);
        for &leaf in &star[1..] {
            let c = r.random_range(1..=max_count.max(1));
            let pair = if outward { (star[0], leaf) } else { (leaf, star[0]) };
            counts.push((pair, c));
        }
    }
    DemandMatrix::from_counts(counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::demand::trace_stats;
    use std::collections::HashSet;

    #[test]
    fn stars_shape() {
        assert_eq!(StarsShape::default().n(), 1024);
        assert!(StarsShape::with_nodes(32, 31, true, 1000).is_err());
        let t = generate_stars(StarsShape { stars: 2, leaves: 1, zipf: true }, 4, 9).unwrap();
        assert_eq!(t.n(), 4);
        for r in t.requests() {
            let (a, b) = (r.source.min(r.destination), r.source.max(r.destination));
            assert!(a % 2 == 0 && b == a + 1, "{r:?}");
        }
    }

    #[test]
    fn zipf_leaf_ratio() {
        let t = generate_stars(StarsShape { stars: 1, leaves: 2, zipf: true }, 100_000, 5).unwrap();
        let hits = |leaf| t.requests().iter().filter(|r| r.source == leaf || r.destination == leaf).count();
        let ratio = hits(1) as f64 / hits(2) as f64;
        assert!((ratio - 2.0).abs() / 2.0 < 0.05, "ratio {ratio}");
    }

    #[test]
    fn stars_are_deterministic_and_structured() {
        let shape = StarsShape::default();
        let a = generate_stars(shape, 10_000, 7).unwrap();
        let b = generate_stars(shape, 10_000, 7).unwrap();
        assert_eq!(a, b);
        let d = DemandMatrix::from_trace(&a).unwrap();
        for e in d.entries() {
            let (c, l) = if e.source % 32 == 0 { (e.source, e.destination) } else { (e.destination, e.source) };
            assert_eq!(c % 32, 0, "{e:?}");
            assert!(l > c && l < c + 32, "{e:?}");
        }
    }

    #[test]
    fn uniform_and_zipf_pairs() {
        let u = generate_uniform_pairs(16, 5000, 1).unwrap();
        assert!(u.requests().iter().all(|r| r.source != r.destination));
        assert_eq!(u.dropped_self_loops(), 0);
        assert_eq!(trace_stats(&u).edges, 16 * 15);
        let z = generate_zipf_pairs(64, 5000, 1.0, 1).unwrap();
        assert_eq!(z.len(), 5000);
        assert_eq!(z, generate_zipf_pairs(64, 5000, 1.0, 1).unwrap());
    }

    #[test]
    fn forest_contract() {
        let d = generate_forest_demand(2, 3, 0).unwrap();
        assert_eq!(d.support(), 1);
        assert_eq!(d.entries()[0].probability, 1.0);
        for seed in 0..50 {
            let d = generate_forest_demand(128, 1 + seed as usize % 5, seed).unwrap();
            assert!(d.is_normalized());
            let mut dests = HashSet::new();
            for e in d.entries() {
                assert!(dests.insert(e.destination), "destination repeated");
            }
            // n - c edges with c components means acyclic; check via union-find.
            let mut parent: Vec<usize> = (0..128).collect();
            fn find(p: &mut [usize], x: usize) -> usize {
                if p[x] != x {
                    let r = find(p, p[x]);
                    p[x] = r;
                }
                p[x]
            }
            for e in d.entries() {
                let (a, b) = (find(&mut parent, e.source), find(&mut parent, e.destination));
                assert_ne!(a, b, "cycle in forest");
                parent[a] = b;
            }
        }
    }

    #[test]
    fn star_demand_contract() {
        let d = generate_star_demand(50, 10, 3).unwrap();
        let mut seen = HashSet::new();
        for e in d.entries() {
            // Each leaf appears in exactly one pair.
            let leaf_side = [e.source, e.destination];
            assert!(leaf_side.iter().any(|&v| seen.insert(v)));
        }
    }
}
