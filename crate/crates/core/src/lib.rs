//! Demand-aware topologies for leaf-spine networks whose spine switches
//! each hold one reconfigurable perfect matching.
//!
//! The logical network is the union of `k` directed matchings over `n`
//! top-of-rack nodes. Requests are routed along shortest paths, and the
//! quantity of interest is the mean hop count over a request trace.

pub mod demand;
pub mod eval;
pub mod graph;
pub mod online;
pub mod seed;
pub mod topology;
