//! Demand-oblivious baseline: the best of several random k-regular digraphs.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{BuildOutcome, TopologyError};
use crate::graph::{perfect_matching, union_of_matchings, MatchingSet, Network, Node};
use crate::seed::{rng, Stream};

pub const DEFAULT_EXPANDER_TRIALS: usize = 10;

/// Rounds of `trials` candidates tried before giving up on connectivity.
const ROUNDS: u64 = 8;

/// Local swap attempts per bad position before falling back to matching.
const FIX_ATTEMPTS: usize = 64;

/// Union of `k` random permutations with no fixed point and no pair shared
/// between two of them; among `trials` strongly connected candidates the
/// one with the smallest all-pairs mean distance wins.
pub fn random_expander(n: usize, k: usize, trials: usize, seed: u64) -> Result<BuildOutcome, TopologyError> {
    if trials == 0 {
        return Err(TopologyError::ZeroTrials);
    }
    Network::new(n, k)?;
    for round in 0..ROUNDS {
        let mut r = rng(seed, Stream::Expander, round);
        let mut best: Option<(f64, MatchingSet, Network)> = None;
        for _ in 0..trials {
            let m = random_matchings(n, k, &mut r)?;
            let g = union_of_matchings(&m);
            let apl = g.all_pairs_apl();
            if apl.is_finite() && best.as_ref().is_none_or(|(b, _, _)| apl < *b) {
                best = Some((apl, m, g));
            }
        }
        if let Some((_, matchings, network)) = best {
            let outcome = BuildOutcome {
                greedy_network: network.clone(),
                network,
                matchings,
                admitted: Vec::new(),
                displaced: Vec::new(),
                fill_edges: 0,
                repair_log: Vec::new(),
            };
            outcome.verify()?;
            return Ok(outcome);
        }
    }
    Err(TopologyError::NoExpander { attempts: trials * ROUNDS as usize })
}

/// `k` permutations, pairwise edge-disjoint and without fixed points.
fn random_matchings<R: Rng + ?Sized>(n: usize, k: usize, r: &mut R) -> Result<MatchingSet, TopologyError> {
    let mut used = vec![vec![false; n]; n];
    let mut perms = Vec::with_capacity(k);
    for _ in 0..k {
        let p = random_permutation(&used, r);
        for (v, &w) in p.iter().enumerate() {
            used[v][w] = true;
        }
        perms.push(p);
    }
    Ok(MatchingSet::new(n, k, perms)?)
}

/// Shuffle, then swap images until every `v -> p[v]` is allowed. `used`
/// marks forbidden pairs; the diagonal is always forbidden.
fn random_permutation<R: Rng + ?Sized>(used: &[Vec<bool>], r: &mut R) -> Vec<Node> {
    let n = used.len();
    let ok = |v: Node, w: Node| v != w && !used[v][w];
    let mut p: Vec<Node> = (0..n).collect();
    p.shuffle(r);
    'positions: for v in 0..n {
        if ok(v, p[v]) {
            continue;
        }
        for _ in 0..FIX_ATTEMPTS {
            let j = r.random_range(0..n);
            if ok(v, p[j]) && ok(j, p[v]) {
                p.swap(v, j);
                continue 'positions;
            }
        }
        // The allowed pairs form a regular bipartite graph with positive
        // degree, which always has a perfect matching.
        let mut adj: Vec<Vec<Node>> = (0..n).map(|v| (0..n).filter(|&w| ok(v, w)).collect()).collect();
        adj.iter_mut().for_each(|a| a.shuffle(r));
        return perfect_matching(&adj).expect("regular bipartite graph has a perfect matching");
    }
    p
}
