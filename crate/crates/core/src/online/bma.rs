//! Online b-matching: a fixed expander backbone plus a bounded-degree cache
//! of direct links that follows the requests.
//!
//! This is a behavioural reconstruction. A pair is promoted to a direct
//! link once it has missed the cache `threshold` times; a full slot gives
//! way to the cached link with the fewest hits since its insertion, oldest
//! first on ties.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{initial_network, DistanceCache, OnlineConfig, OnlineError, ReconfigEvent, RunRecord};
use crate::demand::Trace;
use crate::graph::Node;

pub const DEFAULT_ALPHA: u32 = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct BmaConfig {
    /// Cost parameter; the default threshold.
    pub alpha: u32,
    /// Misses before a pair is cached; `alpha` when unset.
    pub threshold: Option<u32>,
    /// Cache in/out degree bound per node; `k` when unset.
    pub degree: Option<usize>,
}

impl Default for BmaConfig {
    fn default() -> Self {
        BmaConfig { alpha: DEFAULT_ALPHA, threshold: None, degree: None }
    }
}

impl BmaConfig {
    pub fn threshold(&self) -> u32 {
        self.threshold.unwrap_or(self.alpha)
    }

    pub fn degree(&self, k: usize) -> usize {
        self.degree.unwrap_or(k)
    }

    pub fn validate(&self) -> Result<(), OnlineError> {
        if self.alpha == 0 || self.threshold == Some(0) || self.degree == Some(0) {
            return Err(OnlineError::Config("alpha, threshold and cache degree must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
struct Slot {
    peer: Node,
    hits: u64,
    inserted: u64,
}

/// What serving one request did to the cache.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Lookup {
    Hit,
    Miss,
    /// Missed and crossed the threshold: the pair is now cached.
    Inserted {
        evicted: Vec<(Node, Node)>,
    },
}

/// The cache digraph with its per-pair miss counters.
#[derive(Debug, Clone)]
pub struct BmaCache {
    bound: usize,
    threshold: u32,
    out: Vec<Vec<Slot>>,
    inn: Vec<Vec<Node>>,
    misses: HashMap<(Node, Node), u32>,
    clock: u64,
}

impl BmaCache {
    pub fn new(n: usize, bound: usize, threshold: u32) -> Self {
        BmaCache {
            bound,
            threshold,
            out: vec![Vec::new(); n],
            inn: vec![Vec::new(); n],
            misses: HashMap::new(),
            clock: 0,
        }
    }

    pub fn contains(&self, s: Node, d: Node) -> bool {
        self.out[s].iter().any(|x| x.peer == d)
    }

    pub fn out_degree(&self, v: Node) -> usize {
        self.out[v].len()
    }

    pub fn in_degree(&self, v: Node) -> usize {
        self.inn[v].len()
    }

    pub fn misses(&self, s: Node, d: Node) -> u32 {
        self.misses.get(&(s, d)).copied().unwrap_or(0)
    }

    pub fn edges(&self) -> impl Iterator<Item = (Node, Node)> + '_ {
        self.out.iter().enumerate().flat_map(|(s, xs)| xs.iter().map(move |x| (s, x.peer)))
    }

    /// Serve `(s, d)` and update the cache.
    pub fn request(&mut self, s: Node, d: Node) -> Lookup {
        self.clock += 1;
        if let Some(x) = self.out[s].iter_mut().find(|x| x.peer == d) {
            x.hits += 1;
            return Lookup::Hit;
        }
        let c = self.misses.entry((s, d)).or_insert(0);
        *c += 1;
        if *c < self.threshold {
            return Lookup::Miss;
        }
        self.misses.remove(&(s, d));
        let mut evicted = Vec::new();
        if self.out[s].len() >= self.bound {
            let victim = self.out[s].iter().min_by_key(|x| (x.hits, x.inserted)).unwrap().peer;
            evicted.push((s, victim));
            self.remove(s, victim);
        }
        // `(s, d)` was not cached, so the eviction above never frees d's in-slot.
        if self.inn[d].len() >= self.bound {
            let victim = *self.inn[d]
                .iter()
                .min_by_key(|&&x| {
                    let slot = self.slot(x, d);
                    (slot.hits, slot.inserted)
                })
                .unwrap();
            evicted.push((victim, d));
            self.remove(victim, d);
        }
        for e in &evicted {
            self.misses.remove(e);
        }
        self.out[s].push(Slot { peer: d, hits: 0, inserted: self.clock });
        self.inn[d].push(s);
        Lookup::Inserted { evicted }
    }

    fn slot(&self, s: Node, d: Node) -> Slot {
        *self.out[s].iter().find(|x| x.peer == d).expect("cache adjacency in sync")
    }

    fn remove(&mut self, s: Node, d: Node) {
        self.out[s].retain(|x| x.peer != d);
        self.inn[d].retain(|&x| x != s);
    }
}

/// Hits cost one hop; misses are routed on the expander backbone.
pub fn run_bma(trace: &Trace, cfg: &OnlineConfig) -> Result<RunRecord, OnlineError> {
    cfg.validate()?;
    let backbone = initial_network(cfg)?;
    let mut dist = DistanceCache::new(cfg.n);
    let mut cache = BmaCache::new(cfg.n, cfg.bma.degree(cfg.k), cfg.bma.threshold());
    let mut costs = Vec::with_capacity(trace.len());
    let mut events = Vec::new();
    for (i, r) in trace.requests().iter().enumerate() {
        let (s, d) = r.pair();
        let lookup = cache.request(s, d);
        if lookup == Lookup::Hit {
            costs.push(1);
            continue;
        }
        costs.push(dist.dist(&backbone, s, d).finite().ok_or(OnlineError::Unreachable(s, d))?);
        if let Lookup::Inserted { evicted } = lookup {
            events.push(ReconfigEvent { t: i + 1, added: 1, removed: evicted.len() });
        }
    }
    Ok(RunRecord { config: cfg.clone(), costs, events })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::demand::{generate_zipf_pairs, Request};
    use crate::online::Algorithm;

    #[test]
    fn promoted_after_threshold_misses() {
        let mut c = BmaCache::new(4, 1, 6);
        for i in 1..6 {
            assert_eq!(c.request(0, 1), Lookup::Miss);
            assert_eq!(c.misses(0, 1), i);
        }
        assert_eq!(c.request(0, 1), Lookup::Inserted { evicted: vec![] });
        assert!(c.contains(0, 1));
        assert_eq!(c.misses(0, 1), 0);
        assert_eq!(c.request(0, 1), Lookup::Hit);
    }

    #[test]
    fn evicts_least_used_then_oldest() {
        let mut c = BmaCache::new(6, 2, 1);
        c.request(0, 1);
        c.request(0, 2);
        c.request(0, 1); // hit: (0, 1) now has one use
                         // Out-slot of 0 is full; (0, 2) has fewer hits.
        assert_eq!(c.request(0, 3), Lookup::Inserted { evicted: vec![(0, 2)] });
        assert_eq!(c.out_degree(0), 2);
        // (0, 3) and (0, 1): (0, 3) has no hits.
        assert_eq!(c.request(0, 4), Lookup::Inserted { evicted: vec![(0, 3)] });
        // In-slot side: fill node 5's in-slots, then a third source.
        c.request(1, 5);
        c.request(2, 5);
        assert_eq!(c.request(3, 5), Lookup::Inserted { evicted: vec![(1, 5)] }, "oldest among unused");
        assert_eq!(c.in_degree(5), 2);
    }

    #[test]
    fn both_slots_can_be_freed() {
        let mut c = BmaCache::new(4, 1, 1);
        c.request(0, 1);
        c.request(2, 3);
        assert_eq!(c.request(0, 3), Lookup::Inserted { evicted: vec![(0, 1), (2, 3)] });
        assert_eq!(c.edges().collect::<Vec<_>>(), vec![(0, 3)]);
    }

    #[test]
    fn degree_bound_holds_under_load() {
        let trace = generate_zipf_pairs(40, 20_000, 1.2, 4).unwrap();
        let mut c = BmaCache::new(40, 3, 2);
        for r in trace.requests() {
            c.request(r.source, r.destination);
            assert!((0..40).all(|v| c.out_degree(v) <= 3 && c.in_degree(v) <= 3));
        }
    }

    #[test]
    fn run_costs_follow_the_cache() {
        let mut cfg = OnlineConfig::new(Algorithm::Bma, 16, 2);
        cfg.k = 2;
        cfg.expander_trials = 2;
        let trace = Trace::new(16, (0..10).map(|_| Request::new(3, 11))).unwrap();
        let rec = run_bma(&trace, &cfg).unwrap();
        let backbone = initial_network(&cfg).unwrap().dist(3, 11).finite().unwrap();
        assert_eq!(rec.costs[..6], [backbone; 6]);
        assert_eq!(rec.costs[6..], [1; 4]);
        assert_eq!(rec.events, vec![ReconfigEvent { t: 6, added: 1, removed: 0 }]);
    }

    #[test]
    fn unrepeated_pairs_pay_backbone_cost() {
        let mut cfg = OnlineConfig::new(Algorithm::Bma, 8, 2);
        cfg.k = 2;
        let pairs: Vec<_> =
            (0..8).flat_map(|s| (0..8).filter(move |&d| d != s).map(move |d| Request::new(s, d))).collect();
        let trace = Trace::new(8, pairs).unwrap();
        let rec = run_bma(&trace, &cfg).unwrap();
        let g = initial_network(&cfg).unwrap();
        for (r, &c) in trace.requests().iter().zip(&rec.costs) {
            assert_eq!(c, g.dist(r.source, r.destination).finite().unwrap());
        }
        assert!(rec.events.is_empty());
    }
}
