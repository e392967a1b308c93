use rand::seq::IndexedRandom;
use rand::Rng;

use super::{Hops, Network, Node};

/// Which adjacency a search follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Out-edges; "available" means out-degree below `k`.
    Forward,
    /// In-edges (reversed graph); "available" means in-degree below `k`.
    Backward,
}

impl Direction {
    fn neighbors(self, g: &Network, v: Node) -> &[Node] {
        match self {
            Direction::Forward => g.out_neighbors(v),
            Direction::Backward => g.in_neighbors(v),
        }
    }

    fn available(self, g: &Network, v: Node) -> bool {
        match self {
            Direction::Forward => g.out_degree(v) < g.k(),
            Direction::Backward => g.in_degree(v) < g.k(),
        }
    }
}

/// Reusable level-synchronous BFS workspace.
///
/// Visited marks are epoch-stamped so a search costs time proportional to
/// the part of the graph it touches, not to `n`.
#[derive(Debug, Clone)]
pub struct Bfs {
    stamp: Vec<u32>,
    epoch: u32,
    frontier: Vec<Node>,
    next: Vec<Node>,
    candidates: Vec<Node>,
}

impl Bfs {
    pub fn new(n: usize) -> Self {
        Bfs { stamp: vec![0; n], epoch: 0, frontier: Vec::new(), next: Vec::new(), candidates: Vec::new() }
    }

    fn begin(&mut self, n: usize) {
        if self.stamp.len() < n {
            self.stamp.resize(n, 0);
        }
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.epoch = 1;
        }
        self.frontier.clear();
        self.next.clear();
    }

    fn visit(&mut self, v: Node) -> bool {
        if self.stamp[v] == self.epoch {
            return false;
        }
        self.stamp[v] = self.epoch;
        true
    }

    /// Expand the current frontier by one level.
    fn step(&mut self, g: &Network, dir: Direction) {
        self.next.clear();
        let frontier = std::mem::take(&mut self.frontier);
        for &u in &frontier {
            for &w in dir.neighbors(g, u) {
                if self.stamp[w] != self.epoch {
                    self.stamp[w] = self.epoch;
                    self.next.push(w);
                }
            }
        }
        self.frontier = frontier;
        std::mem::swap(&mut self.frontier, &mut self.next);
    }

    /// Hop counts from `s` to every node along `dir`.
    pub fn distances(&mut self, g: &Network, s: Node, dir: Direction) -> Vec<Hops> {
        let mut out = vec![Hops::INFINITE; g.n()];
        self.begin(g.n());
        self.visit(s);
        self.frontier.push(s);
        let mut level = 0;
        while !self.frontier.is_empty() {
            for &v in &self.frontier {
                out[v] = Hops::new(level);
            }
            self.step(g, dir);
            level += 1;
        }
        out
    }

    /// Shortest hop count from `s` to `d`.
    pub fn distance(&mut self, g: &Network, s: Node, d: Node) -> Hops {
        self.distance_within(g, s, d, u32::MAX - 1).map_or(Hops::INFINITE, Hops::new)
    }

    /// `Some(dist(s, d))` if it is at most `bound`, otherwise `None`.
    pub fn distance_within(&mut self, g: &Network, s: Node, d: Node, bound: u32) -> Option<u32> {
        if s == d {
            return Some(0);
        }
        self.begin(g.n());
        self.visit(s);
        self.frontier.push(s);
        let mut level = 0;
        while !self.frontier.is_empty() && level < bound {
            self.step(g, Direction::Forward);
            level += 1;
            if self.stamp[d] == self.epoch {
                return Some(level);
            }
        }
        None
    }

    /// Nearest node to `start` along `dir` whose relevant degree is below
    /// `k`, with its distance. `start` itself qualifies at distance 0.
    /// Equidistant candidates are chosen uniformly with `rng`.
    pub fn nearest_available<R: Rng + ?Sized>(
        &mut self,
        g: &Network,
        start: Node,
        dir: Direction,
        rng: &mut R,
    ) -> Option<(Node, u32)> {
        self.begin(g.n());
        self.visit(start);
        self.frontier.push(start);
        let mut level = 0;
        while !self.frontier.is_empty() {
            self.candidates.clear();
            self.candidates.extend(self.frontier.iter().copied().filter(|&v| dir.available(g, v)));
            if let Some(&x) = self.candidates.choose(rng) {
                return Some((x, level));
            }
            self.step(g, dir);
            level += 1;
        }
        None
    }
}

impl Network {
    /// Convenience wrapper around [`Bfs::nearest_available`].
    pub fn nearest_available<R: Rng + ?Sized>(&self, start: Node, dir: Direction, rng: &mut R) -> Option<(Node, u32)> {
        Bfs::new(self.n).nearest_available(self, start, dir, rng)
    }
}

#[cfg(test)]
#[allow(clippy::needless_range_loop)]
mod tests {
    use super::*;
    use crate::seed::{rng, Stream};

    /// All-pairs distances by repeated relaxation, independent of BFS.
    fn brute_force_apsp(g: &Network) -> Vec<Vec<u64>> {
        const INF: u64 = u64::MAX / 4;
        let n = g.n();
        let mut d = vec![vec![INF; n]; n];
        for (v, row) in d.iter_mut().enumerate() {
            row[v] = 0;
        }
        for (u, v) in g.edges() {
            d[u][v] = d[u][v].min(1);
        }
        loop {
            let mut changed = false;
            for (u, v) in g.edges() {
                for s in 0..n {
                    let cand = d[s][u] + 1;
                    if cand < d[s][v] {
                        d[s][v] = cand;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        d.into_iter().map(|row| row.into_iter().map(|x| if x >= INF { u64::MAX } else { x }).collect()).collect()
    }

    fn random_network(seed: u64, n: usize, k: usize, attempts: usize) -> Network {
        let mut r = rng(seed, Stream::Generator, 0);
        let mut g = Network::new(n, k).unwrap();
        for _ in 0..attempts {
            let u = r.random_range(0..n);
            let v = r.random_range(0..n);
            if g.can_add(u, v) {
                g.add_edge(u, v).unwrap();
            }
        }
        g
    }

    #[test]
    fn chain_distance() {
        let g = Network::from_edges(5, 1, [(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let oracle = brute_force_apsp(&g);
        assert_eq!(oracle[0][3], 3);
        assert_eq!(g.dist(0, 3), Hops::new(3));
        assert_eq!(g.dist(3, 0), Hops::INFINITE);
    }

    #[test]
    fn distance_matches_brute_force() {
        let mut bfs = Bfs::new(0);
        for seed in 0..100u64 {
            let mut r = rng(seed, Stream::Run, 1);
            let n = r.random_range(2..=64);
            let k = r.random_range(1..n.min(6));
            let g = random_network(seed, n, k, r.random_range(0..3 * n * k));
            let oracle = brute_force_apsp(&g);
            for s in 0..n {
                let row = bfs.distances(&g, s, Direction::Forward);
                for d in 0..n {
                    let expect = oracle[s][d];
                    let got = row[d].finite().map_or(u64::MAX, u64::from);
                    assert_eq!(got, expect, "seed {seed} s {s} d {d}");
                    assert_eq!(bfs.distance(&g, s, d), row[d]);
                }
            }
        }
    }

    #[test]
    fn distance_within_bound() {
        let g = Network::from_edges(5, 1, [(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let mut bfs = Bfs::new(5);
        assert_eq!(bfs.distance_within(&g, 0, 3, 3), Some(3));
        assert_eq!(bfs.distance_within(&g, 0, 3, 2), None);
        assert_eq!(bfs.distance_within(&g, 2, 2, 0), Some(0));
    }

    #[test]
    fn nearest_available_examples() {
        let mut r = rng(0, Stream::BfsTies, 0);
        let empty = Network::new(8, 2).unwrap();
        assert_eq!(empty.nearest_available(5, Direction::Forward, &mut r), Some((5, 0)));

        let g = Network::from_edges(5, 1, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(g.nearest_available(0, Direction::Forward, &mut r), Some((2, 2)));
        assert_eq!(g.nearest_available(2, Direction::Backward, &mut r), Some((0, 2)));

        let cycle = Network::from_edges(3, 1, [(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(cycle.nearest_available(0, Direction::Forward, &mut r), None);
    }

    #[test]
    fn nearest_available_is_minimal() {
        let mut bfs = Bfs::new(0);
        for seed in 0..200u64 {
            let mut r = rng(seed, Stream::Run, 2);
            let n = r.random_range(2..=32);
            let k = r.random_range(1..n.min(4));
            let g = random_network(seed ^ 0xABCD, n, k, r.random_range(0..2 * n * k));
            let apsp = brute_force_apsp(&g);
            for s in 0..n {
                let best = (0..n).filter(|&v| g.out_degree(v) < k).map(|v| apsp[s][v]).filter(|&d| d != u64::MAX).min();
                let found = bfs.nearest_available(&g, s, Direction::Forward, &mut r);
                match (best, found) {
                    (None, None) => {}
                    (Some(d), Some((x, dx))) => {
                        assert_eq!(u64::from(dx), d);
                        assert_eq!(apsp[s][x], d);
                        assert!(g.out_degree(x) < k);
                    }
                    other => panic!("seed {seed} s {s}: {other:?}"),
                }
            }
        }
    }

    #[test]
    fn ties_depend_only_on_seed() {
        let g = Network::from_edges(6, 2, [(0, 1), (0, 2), (1, 3), (2, 4)]).unwrap();
        let pick = |seed| {
            let mut r = rng(seed, Stream::BfsTies, 0);
            g.nearest_available(0, Direction::Forward, &mut r).unwrap()
        };
        assert_eq!(pick(1), pick(1));
        let seen: std::collections::BTreeSet<_> = (0..64).map(pick).collect();
        assert_eq!(seen.into_iter().collect::<Vec<_>>(), vec![(1, 1), (2, 1)]);
    }
}
