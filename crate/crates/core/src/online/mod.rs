//! Serving a trace request by request on a network that changes over time.
//!
//! Every algorithm shares one contract: the cost of request `t` is the hop
//! distance from its source to its destination on the network in place at
//! time `t`, and every network in place is strongly connected.

mod bma;
mod cache;
mod meta;

use std::fmt;
use std::num::NonZeroUsize;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub use bma::{run_bma, BmaCache, BmaConfig, Lookup, DEFAULT_ALPHA};
pub use cache::DistanceCache;
pub use meta::{
    egotrees_update, initial_network, kmatching_update, run_meta, run_static, static_egotrees, EgoTreesUpdate,
    KMatchingUpdate, Update,
};

use crate::demand::{DemandError, Trace};
use crate::graph::Node;
use crate::topology::{TopologyError, DEFAULT_EXPANDER_TRIALS};

#[derive(Debug, Error)]
pub enum OnlineError {
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error(transparent)]
    Demand(#[from] DemandError),
    #[error("update at t = {t} produced an unusable network: {reason}")]
    Incomplete { t: usize, reason: String },
    #[error("request ({0}, {1}) is unreachable")]
    Unreachable(Node, Node),
    #[error("trace has {trace} nodes but the run is configured for {config}")]
    NodeCount { trace: usize, config: usize },
    #[error("invalid configuration: {0}")]
    Config(String),
}

/// Which network policy serves the trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    /// Greedy ego trees rebuilt from the recent window every `R` requests.
    EgoTrees,
    /// Greedy k-matching rebuilt from the recent window every `R` requests.
    KMatching,
    /// Fixed expander plus a threshold-driven cache of direct links.
    Bma,
    /// The initial random expander, never changed.
    Expander,
    /// Greedy ego trees built once from the whole trace.
    StaticEgoTrees,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] =
        [Algorithm::EgoTrees, Algorithm::KMatching, Algorithm::Bma, Algorithm::Expander, Algorithm::StaticEgoTrees];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::EgoTrees => "egotrees",
            Algorithm::KMatching => "kmatching",
            Algorithm::Bma => "bma",
            Algorithm::Expander => "expander",
            Algorithm::StaticEgoTrees => "static-egotrees",
        }
    }

    /// Whether the update rate and window influence the result.
    pub fn is_windowed(self) -> bool {
        matches!(self, Algorithm::EgoTrees | Algorithm::KMatching)
    }

    /// The policy is our own reconstruction rather than a fully specified one.
    pub fn is_reconstructed(self) -> bool {
        self == Algorithm::Bma
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = OnlineError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| OnlineError::Config(format!("unknown algorithm {s:?}")))
    }
}

impl Serialize for Algorithm {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for Algorithm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Requests between reconfigurations, or never.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rate {
    Every(NonZeroUsize),
    Never,
}

impl Rate {
    pub fn every(r: usize) -> Result<Self, OnlineError> {
        NonZeroUsize::new(r)
            .map(Rate::Every)
            .ok_or_else(|| OnlineError::Config("update rate must be at least 1".into()))
    }

    /// Whether a reconfiguration follows request `t` (1-based).
    pub fn fires_at(self, t: usize) -> bool {
        match self {
            Rate::Every(r) => t.is_multiple_of(r.get()),
            Rate::Never => false,
        }
    }
}

impl fmt::Display for Rate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rate::Every(r) => write!(f, "{r}"),
            Rate::Never => f.write_str("never"),
        }
    }
}

impl FromStr for Rate {
    type Err = OnlineError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "never" | "inf" => Ok(Rate::Never),
            _ => Rate::every(s.parse().map_err(|_| OnlineError::Config(format!("bad update rate {s:?}")))?),
        }
    }
}

impl Serialize for Rate {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Rate::Every(r) => s.serialize_u64(r.get() as u64),
            Rate::Never => s.serialize_str("never"),
        }
    }
}

impl<'de> Deserialize<'de> for Rate {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Count(usize),
            Word(String),
        }
        match Raw::deserialize(d)? {
            Raw::Count(r) => Rate::every(r),
            Raw::Word(w) => w.parse(),
        }
        .map_err(serde::de::Error::custom)
    }
}

pub const DEFAULT_RATE: usize = 10_000;
pub const DEFAULT_WINDOW: usize = 20_000;
pub const DEFAULT_K: usize = 4;

/// Everything that determines a run besides the trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OnlineConfig {
    pub algorithm: Algorithm,
    pub n: usize,
    pub k: usize,
    pub rate: Rate,
    pub window: usize,
    pub seed: u64,
    pub expander_trials: usize,
    pub bma: BmaConfig,
}

impl OnlineConfig {
    pub fn new(algorithm: Algorithm, n: usize, seed: u64) -> Self {
        OnlineConfig {
            algorithm,
            n,
            k: DEFAULT_K,
            rate: Rate::Every(NonZeroUsize::new(DEFAULT_RATE).unwrap()),
            window: DEFAULT_WINDOW,
            seed,
            expander_trials: DEFAULT_EXPANDER_TRIALS,
            bma: BmaConfig::default(),
        }
    }

    pub fn validate(&self) -> Result<(), OnlineError> {
        let bad = |m: &str| Err(OnlineError::Config(m.into()));
        if self.k == 0 {
            return bad("k must be at least 1");
        }
        if self.n < self.k + 1 {
            return Err(OnlineError::Config(format!("n = {} is too small for k = {}", self.n, self.k)));
        }
        if self.window == 0 {
            return bad("window must be at least 1");
        }
        if self.expander_trials == 0 {
            return bad("expander trials must be at least 1");
        }
        self.bma.validate()
    }
}

/// A topology change that took effect after request `t` (1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ReconfigEvent {
    pub t: usize,
    pub added: usize,
    pub removed: usize,
}

/// Outcome of serving a trace.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub config: OnlineConfig,
    /// Hop count of every served request, in trace order; all at least 1.
    pub costs: Vec<u32>,
    pub events: Vec<ReconfigEvent>,
}

impl RunRecord {
    pub fn requests(&self) -> usize {
        self.costs.len()
    }

    pub fn reconfigs(&self) -> usize {
        self.events.len()
    }
}

/// Serve `trace` with the policy selected in `cfg`.
pub fn run(trace: &Trace, cfg: &OnlineConfig) -> Result<RunRecord, OnlineError> {
    cfg.validate()?;
    if trace.n() != cfg.n {
        return Err(OnlineError::NodeCount { trace: trace.n(), config: cfg.n });
    }
    match cfg.algorithm {
        Algorithm::EgoTrees => run_meta(trace, cfg, &EgoTreesUpdate),
        Algorithm::KMatching => run_meta(trace, cfg, &KMatchingUpdate),
        Algorithm::Bma => run_bma(trace, cfg),
        Algorithm::Expander => run_static(trace, cfg, &initial_network(cfg)?),
        Algorithm::StaticEgoTrees => run_static(trace, cfg, &static_egotrees(trace, cfg)?),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert!("bogus".parse::<Algorithm>().is_err());
    }

    #[test]
    fn rate_parsing_and_json() {
        assert_eq!("never".parse::<Rate>().unwrap(), Rate::Never);
        assert_eq!("4".parse::<Rate>().unwrap(), Rate::every(4).unwrap());
        assert!("0".parse::<Rate>().is_err());
        assert_eq!(serde_json::to_string(&Rate::Never).unwrap(), "\"never\"");
        assert_eq!(serde_json::from_str::<Rate>("10000").unwrap().to_string(), "10000");
        assert!(Rate::every(4).unwrap().fires_at(8));
        assert!(!Rate::Never.fires_at(usize::MAX));
    }

    #[test]
    fn config_validation() {
        let mut c = OnlineConfig::new(Algorithm::EgoTrees, 16, 0);
        c.validate().unwrap();
        c.k = 16;
        assert!(c.validate().is_err());
        c.k = 2;
        c.window = 0;
        assert!(c.validate().is_err());
    }
}
