use crate::graph::{Bfs, Direction, Hops, Network, Node};

/// Distance rows of the current network, one BFS per source on first use.
///
/// Rows are kept across [`DistanceCache::invalidate`] calls and only marked
/// stale, so a long run allocates at most one row per distinct source.
#[derive(Debug)]
pub struct DistanceCache {
    bfs: Bfs,
    rows: Vec<Vec<Hops>>,
    fresh: Vec<u64>,
    epoch: u64,
}

impl DistanceCache {
    pub fn new(n: usize) -> Self {
        DistanceCache { bfs: Bfs::new(n), rows: vec![Vec::new(); n], fresh: vec![0; n], epoch: 1 }
    }

    /// Forget every row; call whenever the network changes.
    pub fn invalidate(&mut self) {
        self.epoch += 1;
    }

    pub fn dist(&mut self, g: &Network, s: Node, d: Node) -> Hops {
        if self.fresh[s] != self.epoch {
            self.rows[s] = self.bfs.distances(g, s, Direction::Forward);
            self.fresh[s] = self.epoch;
        }
        self.rows[s][d]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tracks_network_changes() {
        let mut g = Network::from_edges(4, 1, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let mut c = DistanceCache::new(4);
        assert_eq!(c.dist(&g, 0, 3), Hops::new(3));
        g.remove_edge(0, 1).unwrap();
        g.remove_edge(2, 3).unwrap();
        g.add_edge(0, 3).unwrap();
        g.add_edge(2, 1).unwrap();
        assert_eq!(c.dist(&g, 0, 3), Hops::new(3), "stale until invalidated");
        c.invalidate();
        assert_eq!(c.dist(&g, 0, 3), Hops::new(1));
        assert_eq!(c.dist(&g, 0, 2), Hops::INFINITE);
    }
}
