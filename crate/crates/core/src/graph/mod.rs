//! Degree-bounded directed multigraphs.
//!
//! A [`Network`] is the logical topology seen by the ToR switches: the union
//! of the `k` spine matchings. Every node has at most `k` out-edges and at
//! most `k` in-edges, self-loops are rejected, and parallel edges are kept
//! (two spine switches may connect the same pair).

mod bfs;
mod matching;
mod scc;

use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use bfs::{Bfs, Direction};
pub(crate) use matching::perfect_matching;
pub use matching::{decompose_to_matchings, union_of_matchings, MatchingSet};
pub use scc::{strongly_connected_components, Components};

/// Node identifier, `0..n`.
pub type Node = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("degree bound k must be at least 1")]
    ZeroDegree,
    #[error("a self-loop-free {k}-regular digraph needs n >= {} nodes, got {n}", k + 1)]
    TooFewNodes { n: usize, k: usize },
    #[error("node {node} is out of range for a network of {n} nodes")]
    NodeOutOfRange { node: Node, n: usize },
    #[error("self-loop ({0}, {0}) is not allowed")]
    SelfLoop(Node),
    #[error("out-degree of node {0} is already full")]
    OutDegreeFull(Node),
    #[error("in-degree of node {0} is already full")]
    InDegreeFull(Node),
    #[error("edge ({0}, {1}) is not present")]
    MissingEdge(Node, Node),
    #[error("network is not {k}-regular: node {node} has out-degree {out} and in-degree {inn}")]
    NotRegular { k: usize, node: Node, out: usize, inn: usize },
    #[error("matching {index} is not a permutation of 0..{n}")]
    NotPermutation { index: usize, n: usize },
    #[error("expected {expected} matchings of length {n}, found {found}")]
    MatchingShape { expected: usize, n: usize, found: usize },
    #[error("no perfect matching exists in extraction round {round}")]
    DecompositionFailed { round: usize },
}

/// Hop count with a saturating "unreachable" sentinel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Hops(u32);

impl Hops {
    pub const ZERO: Hops = Hops(0);
    /// Strictly greater than every finite hop count.
    pub const INFINITE: Hops = Hops(u32::MAX);

    pub fn new(h: u32) -> Self {
        debug_assert!(h != u32::MAX);
        Hops(h)
    }

    pub fn is_finite(self) -> bool {
        self != Self::INFINITE
    }

    pub fn finite(self) -> Option<u32> {
        self.is_finite().then_some(self.0)
    }
}

impl Add for Hops {
    type Output = Hops;

    fn add(self, rhs: Hops) -> Hops {
        if !self.is_finite() || !rhs.is_finite() {
            return Hops::INFINITE;
        }
        Hops(self.0.saturating_add(rhs.0))
    }
}

impl Add<u32> for Hops {
    type Output = Hops;

    fn add(self, rhs: u32) -> Hops {
        self + Hops(rhs.min(u32::MAX - 1))
    }
}

impl fmt::Display for Hops {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.finite() {
            Some(h) => write!(f, "{h}"),
            None => f.write_str("inf"),
        }
    }
}

/// Directed multigraph with per-node in/out degree capped at `k`.
#[derive(Debug, Clone)]
pub struct Network {
    n: usize,
    k: usize,
    out_adj: Vec<Vec<Node>>,
    in_adj: Vec<Vec<Node>>,
    edges: usize,
}

impl Network {
    /// Empty network on `n` nodes with degree bound `k`.
    pub fn new(n: usize, k: usize) -> Result<Self, GraphError> {
        if k == 0 {
            return Err(GraphError::ZeroDegree);
        }
        if n < k + 1 {
            return Err(GraphError::TooFewNodes { n, k });
        }
        Ok(Network { n, k, out_adj: vec![Vec::with_capacity(k); n], in_adj: vec![Vec::with_capacity(k); n], edges: 0 })
    }

    /// Build from an edge list, checking every insertion.
    pub fn from_edges<I>(n: usize, k: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (Node, Node)>,
    {
        let mut g = Network::new(n, k)?;
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    /// Maximum number of edges, `n * k`.
    pub fn capacity(&self) -> usize {
        self.n * self.k
    }

    pub fn out_degree(&self, v: Node) -> usize {
        self.out_adj[v].len()
    }

    pub fn in_degree(&self, v: Node) -> usize {
        self.in_adj[v].len()
    }

    /// Out-neighbours of `v`, with repeats for parallel edges.
    pub fn out_neighbors(&self, v: Node) -> &[Node] {
        &self.out_adj[v]
    }

    /// In-neighbours of `v`, with repeats for parallel edges.
    pub fn in_neighbors(&self, v: Node) -> &[Node] {
        &self.in_adj[v]
    }

    fn check_node(&self, v: Node) -> Result<(), GraphError> {
        if v >= self.n {
            return Err(GraphError::NodeOutOfRange { node: v, n: self.n });
        }
        Ok(())
    }

    /// Whether `(u, v)` can be inserted without violating a degree cap.
    pub fn can_add(&self, u: Node, v: Node) -> bool {
        u < self.n && v < self.n && u != v && self.out_degree(u) < self.k && self.in_degree(v) < self.k
    }

    pub fn add_edge(&mut self, u: Node, v: Node) -> Result<(), GraphError> {
        self.check_node(u)?;
        self.check_node(v)?;
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if self.out_degree(u) >= self.k {
            return Err(GraphError::OutDegreeFull(u));
        }
        if self.in_degree(v) >= self.k {
            return Err(GraphError::InDegreeFull(v));
        }
        self.out_adj[u].push(v);
        self.in_adj[v].push(u);
        self.edges += 1;
        Ok(())
    }

    /// Remove one copy of `(u, v)`.
    pub fn remove_edge(&mut self, u: Node, v: Node) -> Result<(), GraphError> {
        self.check_node(u)?;
        self.check_node(v)?;
        let i = self.out_adj[u].iter().position(|&w| w == v).ok_or(GraphError::MissingEdge(u, v))?;
        self.out_adj[u].remove(i);
        let j = self.in_adj[v].iter().position(|&w| w == u).expect("in/out adjacency out of sync");
        self.in_adj[v].remove(j);
        self.edges -= 1;
        Ok(())
    }

    pub fn has_edge(&self, u: Node, v: Node) -> bool {
        u < self.n && self.out_adj[u].contains(&v)
    }

    /// Number of parallel copies of `(u, v)`.
    pub fn multiplicity(&self, u: Node, v: Node) -> usize {
        if u >= self.n {
            return 0;
        }
        self.out_adj[u].iter().filter(|&&w| w == v).count()
    }

    /// All edges, grouped by source, parallel copies repeated.
    pub fn edges(&self) -> impl Iterator<Item = (Node, Node)> + '_ {
        self.out_adj.iter().enumerate().flat_map(|(u, vs)| vs.iter().map(move |&v| (u, v)))
    }

    /// Edge multiset in canonical (sorted) order.
    pub fn sorted_edges(&self) -> Vec<(Node, Node)> {
        let mut e: Vec<_> = self.edges().collect();
        e.sort_unstable();
        e
    }

    /// Edge-multiset equality, ignoring insertion order.
    pub fn same_edges(&self, other: &Network) -> bool {
        self.n == other.n && self.edges == other.edges && self.sorted_edges() == other.sorted_edges()
    }

    pub fn is_regular(&self) -> bool {
        (0..self.n).all(|v| self.out_degree(v) == self.k && self.in_degree(v) == self.k)
    }

    /// First node breaking k-regularity, as an error.
    pub fn check_regular(&self) -> Result<(), GraphError> {
        match (0..self.n).find(|&v| self.out_degree(v) != self.k || self.in_degree(v) != self.k) {
            None => Ok(()),
            Some(node) => {
                Err(GraphError::NotRegular { k: self.k, node, out: self.out_degree(node), inn: self.in_degree(node) })
            }
        }
    }

    pub fn is_strongly_connected(&self) -> bool {
        strongly_connected_components(self).count() == 1
    }

    /// k-regular and strongly connected: deployable as `k` matchings with
    /// every request routable.
    pub fn is_complete(&self) -> bool {
        self.is_regular() && self.is_strongly_connected()
    }

    /// Shortest directed hop count from `s` to `d`.
    pub fn dist(&self, s: Node, d: Node) -> Hops {
        Bfs::new(self.n).distance(self, s, d)
    }

    /// Hop counts from `s` to every node.
    pub fn distances_from(&self, s: Node) -> Vec<Hops> {
        Bfs::new(self.n).distances(self, s, Direction::Forward)
    }

    /// Mean distance over all ordered pairs `u != v`; infinite if the
    /// network is not strongly connected.
    pub fn all_pairs_apl(&self) -> f64 {
        let mut bfs = Bfs::new(self.n);
        let mut total: u64 = 0;
        for s in 0..self.n {
            for (d, h) in bfs.distances(self, s, Direction::Forward).into_iter().enumerate() {
                if d == s {
                    continue;
                }
                match h.finite() {
                    Some(h) => total += u64::from(h),
                    None => return f64::INFINITY,
                }
            }
        }
        total as f64 / (self.n * (self.n - 1)) as f64
    }
}

#[derive(Serialize, Deserialize)]
struct NetworkJson {
    n: usize,
    k: usize,
    edges: Vec<(Node, Node)>,
}

impl Serialize for Network {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        NetworkJson { n: self.n, k: self.k, edges: self.sorted_edges() }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Network {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = NetworkJson::deserialize(deserializer)?;
        Network::from_edges(raw.n, raw.k, raw.edges).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction() {
        let g = Network::new(4, 1).unwrap();
        assert_eq!(g.edge_count(), 0);
        assert!((0..4).all(|v| g.out_degree(v) == 0 && g.in_degree(v) == 0));
        assert_eq!(Network::new(1024, 4).unwrap().capacity(), 4096);
        assert_eq!(Network::new(3, 3).unwrap_err(), GraphError::TooFewNodes { n: 3, k: 3 });
        assert_eq!(Network::new(3, 0).unwrap_err(), GraphError::ZeroDegree);
    }

    #[test]
    fn add_edge_errors_are_distinct() {
        let mut g = Network::new(4, 1).unwrap();
        g.add_edge(0, 1).unwrap();
        assert_eq!(g.out_degree(0), 1);
        assert_eq!(g.in_degree(1), 1);
        assert_eq!(g.add_edge(0, 2), Err(GraphError::OutDegreeFull(0)));
        assert_eq!(g.add_edge(2, 1), Err(GraphError::InDegreeFull(1)));
        assert_eq!(g.add_edge(2, 2), Err(GraphError::SelfLoop(2)));
        assert_eq!(g.add_edge(9, 2), Err(GraphError::NodeOutOfRange { node: 9, n: 4 }));
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn parallel_edges_and_removal() {
        let mut g = Network::new(3, 2).unwrap();
        g.add_edge(0, 1).unwrap();
        g.add_edge(0, 1).unwrap();
        assert_eq!(g.multiplicity(0, 1), 2);
        assert_eq!(g.dist(0, 1), Hops::new(1));
        g.remove_edge(0, 1).unwrap();
        assert_eq!(g.multiplicity(0, 1), 1);
        assert_eq!(g.remove_edge(1, 0), Err(GraphError::MissingEdge(1, 0)));
    }

    #[test]
    fn hops_saturate() {
        assert_eq!(Hops::INFINITE + Hops::new(1), Hops::INFINITE);
        assert_eq!(Hops::new(2) + 1, Hops::new(3));
        assert!(Hops::new(u32::MAX - 1) < Hops::INFINITE);
        assert_eq!(Hops::INFINITE.to_string(), "inf");
    }

    #[test]
    fn fig1_path_length() {
        // v1 -> v3 -> v5 -> v7 using 0-based ids 0, 2, 4, 6.
        let g = Network::from_edges(7, 3, [(0, 2), (2, 4), (4, 6)]).unwrap();
        assert_eq!(g.dist(0, 6), Hops::new(3));
        assert_eq!(g.dist(6, 6), Hops::ZERO);
        assert_eq!(g.dist(6, 0), Hops::INFINITE);
    }

    #[test]
    fn json_round_trip() {
        let g = Network::from_edges(3, 1, [(0, 1), (1, 2), (2, 0)]).unwrap();
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(s, r#"{"n":3,"k":1,"edges":[[0,1],[1,2],[2,0]]}"#);
        let back: Network = serde_json::from_str(&s).unwrap();
        assert!(back.same_edges(&g));
        assert!(serde_json::from_str::<Network>(r#"{"n":3,"k":1,"edges":[[0,0]]}"#).is_err());
    }
}
