use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::{GraphError, Network, Node};

/// One directed perfect matching per spine switch.
///
/// `matchings[i][v]` is the output port that input port `v` of switch `i`
/// is connected to. A port mapped to itself is *parked*: it keeps the
/// matching a bijection but contributes no edge to the network.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawMatchingSet")]
pub struct MatchingSet {
    n: usize,
    k: usize,
    matchings: Vec<Vec<Node>>,
}

#[derive(Deserialize)]
struct RawMatchingSet {
    n: usize,
    k: usize,
    matchings: Vec<Vec<Node>>,
}

impl TryFrom<RawMatchingSet> for MatchingSet {
    type Error = GraphError;

    fn try_from(raw: RawMatchingSet) -> Result<Self, Self::Error> {
        MatchingSet::new(raw.n, raw.k, raw.matchings)
    }
}

impl MatchingSet {
    pub fn new(n: usize, k: usize, matchings: Vec<Vec<Node>>) -> Result<Self, GraphError> {
        if matchings.len() != k {
            return Err(GraphError::MatchingShape { expected: k, n, found: matchings.len() });
        }
        let mut seen = vec![false; n];
        for (index, m) in matchings.iter().enumerate() {
            if m.len() != n {
                return Err(GraphError::MatchingShape { expected: k, n, found: m.len() });
            }
            seen.iter_mut().for_each(|s| *s = false);
            for &out in m {
                if out >= n || std::mem::replace(&mut seen[out], true) {
                    return Err(GraphError::NotPermutation { index, n });
                }
            }
        }
        Ok(MatchingSet { n, k, matchings })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn matchings(&self) -> &[Vec<Node>] {
        &self.matchings
    }

    pub fn matching(&self, i: usize) -> &[Node] {
        &self.matchings[i]
    }

    pub fn parked_ports(&self) -> usize {
        self.matchings.iter().map(|m| m.iter().enumerate().filter(|&(v, &w)| v == w).count()).sum()
    }
}

/// `N = M_1 ∪ ... ∪ M_k` as a multigraph; parked ports are skipped.
pub fn union_of_matchings(m: &MatchingSet) -> Network {
    let mut g = Network::new(m.n, m.k).expect("a valid matching set has n >= k + 1");
    for matching in &m.matchings {
        for (v, &w) in matching.iter().enumerate() {
            if v != w {
                g.add_edge(v, w).expect("a permutation never exceeds the degree bound");
            }
        }
    }
    g
}

/// Split a k-regular multigraph into `k` perfect matchings.
///
/// The graph is viewed as a k-regular bipartite graph between out-ports and
/// in-ports. A perfect matching always exists there (Hall), so each round
/// extracts one with Hopcroft-Karp and removes its edges.
pub fn decompose_to_matchings(g: &Network) -> Result<MatchingSet, GraphError> {
    g.check_regular()?;
    let n = g.n();
    let mut adj: Vec<Vec<Node>> = (0..n).map(|v| g.out_neighbors(v).to_vec()).collect();
    let mut matchings = Vec::with_capacity(g.k());
    let mut hk = HopcroftKarp::new(n);
    for round in 0..g.k() {
        let matched = hk.run(&adj);
        if matched != n {
            return Err(GraphError::DecompositionFailed { round });
        }
        let m = hk.pair_left.clone();
        for (u, &v) in m.iter().enumerate() {
            let i = adj[u].iter().position(|&w| w == v).expect("matched edge present");
            adj[u].swap_remove(i);
        }
        matchings.push(m);
    }
    MatchingSet::new(n, g.k(), matchings)
}

/// A perfect matching of the bipartite graph `u -> adj[u]`, if one exists.
/// `result[u]` is the right-side partner of `u`.
pub(crate) fn perfect_matching(adj: &[Vec<Node>]) -> Option<Vec<Node>> {
    let mut hk = HopcroftKarp::new(adj.len());
    (hk.run(adj) == adj.len()).then_some(hk.pair_left)
}

const NIL: usize = usize::MAX;
const INF: u32 = u32::MAX;

struct HopcroftKarp {
    pair_left: Vec<Node>,
    pair_right: Vec<Node>,
    layer: Vec<u32>,
    cursor: Vec<usize>,
    queue: VecDeque<Node>,
}

impl HopcroftKarp {
    fn new(n: usize) -> Self {
        HopcroftKarp {
            pair_left: vec![NIL; n],
            pair_right: vec![NIL; n],
            layer: vec![INF; n],
            cursor: vec![0; n],
            queue: VecDeque::new(),
        }
    }

    /// Maximum matching size; `pair_left` holds the result.
    fn run(&mut self, adj: &[Vec<Node>]) -> usize {
        self.pair_left.iter_mut().for_each(|p| *p = NIL);
        self.pair_right.iter_mut().for_each(|p| *p = NIL);
        let mut size = 0;
        // Greedy seed.
        for (u, nbrs) in adj.iter().enumerate() {
            if let Some(&v) = nbrs.iter().find(|&&v| self.pair_right[v] == NIL) {
                self.pair_left[u] = v;
                self.pair_right[v] = u;
                size += 1;
            }
        }
        while self.layer_free(adj) {
            self.cursor.iter_mut().for_each(|c| *c = 0);
            for u in 0..adj.len() {
                if self.pair_left[u] == NIL && self.augment(adj, u) {
                    size += 1;
                }
            }
        }
        size
    }

    fn layer_free(&mut self, adj: &[Vec<Node>]) -> bool {
        self.queue.clear();
        for u in 0..adj.len() {
            if self.pair_left[u] == NIL {
                self.layer[u] = 0;
                self.queue.push_back(u);
            } else {
                self.layer[u] = INF;
            }
        }
        let mut found = false;
        while let Some(u) = self.queue.pop_front() {
            for &v in &adj[u] {
                let w = self.pair_right[v];
                if w == NIL {
                    found = true;
                } else if self.layer[w] == INF {
                    self.layer[w] = self.layer[u] + 1;
                    self.queue.push_back(w);
                }
            }
        }
        found
    }

    fn augment(&mut self, adj: &[Vec<Node>], u: Node) -> bool {
        while self.cursor[u] < adj[u].len() {
            let v = adj[u][self.cursor[u]];
            self.cursor[u] += 1;
            let w = self.pair_right[v];
            let ok = w == NIL || (self.layer[w] == self.layer[u].wrapping_add(1) && self.augment(adj, w));
            if ok {
                self.pair_left[u] = v;
                self.pair_right[v] = u;
                return true;
            }
        }
        self.layer[u] = INF;
        false
    }
}
