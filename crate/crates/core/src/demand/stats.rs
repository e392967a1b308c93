use std::collections::HashSet;

use serde::Serialize;

use super::Trace;
use crate::graph::Node;

/// Summary of a trace's demand graph.
///
/// Degrees are taken in the demand graph (distinct directed pairs). The
/// per-node statistic is `max(in-degree, out-degree)`, aggregated over the
/// nodes that appear in the trace.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceStats {
    pub length: usize,
    pub nodes: usize,
    pub edges: usize,
    pub avg_degree: f64,
    pub min_degree: usize,
    pub max_degree: usize,
    pub dropped_self_loops: usize,
}

pub fn trace_stats(trace: &Trace) -> TraceStats {
    let n = trace.n();
    let pairs: HashSet<(Node, Node)> = trace.requests().iter().map(|r| r.pair()).collect();
    let mut out_deg = vec![0usize; n];
    let mut in_deg = vec![0usize; n];
    let mut present = vec![false; n];
    for &(u, v) in &pairs {
        out_deg[u] += 1;
        in_deg[v] += 1;
        present[u] = true;
        present[v] = true;
    }
    let per_node: Vec<usize> = (0..n).filter(|&v| present[v]).map(|v| out_deg[v].max(in_deg[v])).collect();
    let nodes = per_node.len();
    TraceStats {
        length: trace.len(),
        nodes,
        edges: pairs.len(),
        avg_degree: if nodes == 0 { 0.0 } else { per_node.iter().sum::<usize>() as f64 / nodes as f64 },
        min_degree: per_node.iter().copied().min().unwrap_or(0),
        max_degree: per_node.iter().copied().max().unwrap_or(0),
        dropped_self_loops: trace.dropped_self_loops(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::demand::Request;

    #[test]
    fn tiny_traces() {
        let t = Trace::new(2, [Request::new(0, 1)]).unwrap();
        let s = trace_stats(&t);
        assert_eq!((s.edges, s.min_degree, s.max_degree, s.nodes), (1, 1, 1, 2));

        let t = Trace::new(2, [Request::new(0, 1), Request::new(1, 0), Request::new(0, 1)]).unwrap();
        let s = trace_stats(&t);
        assert_eq!((s.length, s.edges, s.min_degree, s.max_degree), (3, 2, 1, 1));
        assert_eq!(s.avg_degree, 1.0);
    }

    #[test]
    fn hub_degree() {
        let t = Trace::new(5, (1..5).map(|v| Request::new(0, v))).unwrap();
        let s = trace_stats(&t);
        assert_eq!((s.nodes, s.edges, s.min_degree, s.max_degree), (5, 4, 1, 4));
        assert!((s.avg_degree - 8.0 / 5.0).abs() < 1e-12);
    }
}
