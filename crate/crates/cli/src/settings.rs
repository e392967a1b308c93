//! Turning flags and an optional JSON config file into fully resolved run
//! plans. A flag always beats the file; the file beats defaults.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use tmtnet::demand::{generate_stars, generate_uniform_pairs, generate_zipf_pairs, StarsShape, Trace};
use tmtnet::online::{Algorithm, BmaConfig, OnlineConfig, Rate, DEFAULT_K, DEFAULT_RATE, DEFAULT_WINDOW};
use tmtnet::seed::{derive, Stream};
use tmtnet::topology::DEFAULT_EXPANDER_TRIALS;

use crate::args::{CommonArgs, RunArgs, SweepArgs};
use crate::CliError;

pub const OUT_ENV: &str = "TMTNET_OUT";
pub const DEFAULT_GRID: [usize; 5] = [5_000, 10_000, 20_000, 40_000, 100_000];

/// Keys accepted in a config file; each mirrors the flag of the same name.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub trace: Option<String>,
    pub traces: Option<Vec<String>>,
    pub algo: Option<String>,
    pub algos: Option<Vec<String>>,
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub rate: Option<Rate>,
    pub rates: Option<Vec<Rate>>,
    pub window: Option<usize>,
    pub windows: Option<Vec<usize>>,
    pub seed: Option<u64>,
    pub warmup: Option<usize>,
    pub alpha: Option<u32>,
    pub threshold: Option<u32>,
    pub trials: Option<usize>,
    pub out_dir: Option<PathBuf>,
    pub name: Option<String>,
    pub activity: Option<bool>,
    pub jobs: Option<usize>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(FileConfig::default());
        };
        let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
        serde_json::from_str(&text).map_err(|source| CliError::Json { path: path.to_path_buf(), source })
    }
}

/// Where requests come from: a file, or a generator described inline as
/// `gen:KIND,key=value,...`.
#[derive(Debug, Clone, PartialEq)]
pub enum TraceSource {
    File(PathBuf),
    Stars { shape: StarsShape, length: usize, seed: u64 },
    Uniform { n: usize, length: usize, seed: u64 },
    Zipf { n: usize, length: usize, exponent: f64, seed: u64 },
}

impl TraceSource {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        let Some(spec) = s.strip_prefix("gen:") else {
            return Ok(TraceSource::File(PathBuf::from(s)));
        };
        let mut parts = spec.split(',');
        let kind = parts.next().unwrap_or_default();
        let mut kv = Vec::new();
        for p in parts {
            let (k, v) = p.split_once('=').ok_or_else(|| bad_gen(s, &format!("{p:?} is not key=value")))?;
            kv.push((k, v));
        }
        let get = |key: &str| kv.iter().find(|(k, _)| *k == key).map(|(_, v)| *v);
        let num = |key: &str, default: Option<usize>| -> Result<usize, CliError> {
            match get(key) {
                Some(v) => v.parse().map_err(|_| bad_gen(s, &format!("{key}={v} is not a count"))),
                None => default.ok_or_else(|| bad_gen(s, &format!("missing {key}="))),
            }
        };
        let seed = num("seed", Some(0))? as u64;
        let length = num("length", Some(1_000_000))?;
        let allowed: &[&str] = match kind {
            "stars" => &["stars", "leaves", "uniform", "length", "seed"],
            "uniform" => &["n", "length", "seed"],
            "zipf" => &["n", "exponent", "length", "seed"],
            _ => return Err(bad_gen(s, &format!("unknown generator {kind:?}"))),
        };
        if let Some((k, _)) = kv.iter().find(|(k, _)| !allowed.contains(k)) {
            return Err(bad_gen(s, &format!("{kind} takes no {k}=")));
        }
        Ok(match kind {
            "stars" => TraceSource::Stars {
                shape: StarsShape {
                    stars: num("stars", Some(32))?,
                    leaves: num("leaves", Some(31))?,
                    zipf: get("uniform") != Some("true"),
                },
                length,
                seed,
            },
            "uniform" => TraceSource::Uniform { n: num("n", None)?, length, seed },
            _ => TraceSource::Zipf {
                n: num("n", None)?,
                length,
                exponent: get("exponent")
                    .map(|v| v.parse().map_err(|_| bad_gen(s, &format!("exponent={v} is not a number"))))
                    .transpose()?
                    .unwrap_or(1.0),
                seed,
            },
        })
    }

    /// Short name used in reports and file names.
    pub fn name(&self) -> String {
        match self {
            TraceSource::File(p) => p.file_stem().map_or_else(|| "trace".into(), |s| s.to_string_lossy().into_owned()),
            TraceSource::Stars { shape, length, seed } => {
                format!(
                    "stars{}x{}-m{length}-s{seed}{}",
                    shape.stars,
                    shape.leaves,
                    if shape.zipf { "" } else { "-flat" }
                )
            }
            TraceSource::Uniform { n, length, seed } => format!("uniform{n}-m{length}-s{seed}"),
            TraceSource::Zipf { n, length, exponent, seed } => format!("zipf{n}-a{exponent}-m{length}-s{seed}"),
        }
    }

    pub fn load(&self, n: Option<usize>) -> Result<Trace, CliError> {
        let t = match self {
            TraceSource::File(p) => match n {
                Some(n) => Trace::load(p, n)?,
                None => Trace::load_inferred(p)?,
            },
            TraceSource::Stars { shape, length, seed } => generate_stars(*shape, *length, *seed)?,
            TraceSource::Uniform { n, length, seed } => generate_uniform_pairs(*n, *length, *seed)?,
            TraceSource::Zipf { n, length, exponent, seed } => generate_zipf_pairs(*n, *length, *exponent, *seed)?,
        };
        match n {
            Some(n) if n != t.n() => Err(CliError::Config(format!("trace has {} nodes but --n is {n}", t.n()))),
            _ => Ok(t),
        }
    }
}

fn bad_gen(spec: &str, why: &str) -> CliError {
    CliError::Config(format!("generator spec {spec:?}: {why}"))
}

/// Parameters shared by every run of a command, after merging.
#[derive(Debug, Clone)]
pub struct Shared {
    pub n: Option<usize>,
    pub k: usize,
    pub seed: u64,
    pub warmup: Option<usize>,
    pub bma: BmaConfig,
    pub trials: usize,
    pub out_dir: PathBuf,
}

impl Shared {
    fn resolve(a: &CommonArgs, f: &FileConfig) -> Self {
        let bma = BmaConfig {
            alpha: a.alpha.or(f.alpha).unwrap_or(BmaConfig::default().alpha),
            threshold: a.threshold.or(f.threshold),
            degree: None,
        };
        let out_dir = a
            .out_dir
            .clone()
            .or_else(|| f.out_dir.clone())
            .or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("out"));
        Shared {
            n: a.n.or(f.n),
            k: a.k.or(f.k).unwrap_or(DEFAULT_K),
            seed: a.seed.or(f.seed).unwrap_or(0),
            warmup: a.warmup.or(f.warmup),
            bma,
            trials: a.trials.or(f.trials).unwrap_or(DEFAULT_EXPANDER_TRIALS),
            out_dir,
        }
    }
}

/// One fully specified run.
#[derive(Debug, Clone)]
pub struct RunSpec {
    pub trace: TraceSource,
    pub algo: Algorithm,
    pub rate: Rate,
    pub window: usize,
    pub shared: Shared,
}

impl RunSpec {
    pub fn warmup(&self) -> usize {
        self.shared.warmup.unwrap_or(self.window)
    }

    /// Seed of this run: the master seed mixed with the trace and the
    /// (W, R) point. The algorithm is left out so that all algorithms at
    /// one point start from the same network.
    pub fn run_seed(&self) -> u64 {
        let key = format!("{}|{}|{}", self.trace.name(), self.rate, self.window);
        derive(self.shared.seed, Stream::Run, fnv1a(key.as_bytes()))
    }

    pub fn online_config(&self, n: usize) -> OnlineConfig {
        OnlineConfig {
            algorithm: self.algo,
            n,
            k: self.shared.k,
            rate: self.rate,
            window: self.window,
            seed: self.run_seed(),
            expander_trials: self.shared.trials,
            bma: self.shared.bma,
        }
    }

    /// Everything checkable before the trace is loaded.
    pub fn validate(&self) -> Result<(), CliError> {
        Ok(self.online_config(self.shared.n.unwrap_or(usize::MAX)).validate()?)
    }

    pub fn default_name(&self) -> String {
        format!("{}-{}-R{}-W{}", self.trace.name(), self.algo, self.rate, self.window)
    }
}

/// FNV-1a: stable across platforms and toolchains, unlike std's hasher.
fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3))
}

fn parse_algo(s: &str) -> Result<Algorithm, CliError> {
    s.parse().map_err(|_| {
        let names: Vec<_> = Algorithm::ALL.iter().map(|a| a.name()).collect();
        CliError::Config(format!("unknown algorithm {s:?}; expected one of {}", names.join(", ")))
    })
}

fn parse_rate(s: &str) -> Result<Rate, CliError> {
    s.parse().map_err(|_| CliError::Config(format!("bad update rate {s:?}")))
}

/// `run` flags merged with the config file.
pub struct RunPlan {
    pub spec: RunSpec,
    pub name: Option<String>,
    pub activity: bool,
}

pub fn resolve_run(a: &RunArgs) -> Result<RunPlan, CliError> {
    let f = FileConfig::load(a.common.config.as_deref())?;
    let trace = a.trace.clone().or(f.trace.clone()).ok_or_else(|| CliError::Config("no --trace given".into()))?;
    let algo =
        parse_algo(&a.algo.clone().or(f.algo.clone()).ok_or_else(|| CliError::Config("no --algo given".into()))?)?;
    let rate = match &a.rate {
        Some(r) => parse_rate(r)?,
        None => f.rate.map_or_else(|| Rate::every(DEFAULT_RATE).map_err(CliError::from), Ok)?,
    };
    let window = a.window.or(f.window).unwrap_or(DEFAULT_WINDOW);
    let spec =
        RunSpec { trace: TraceSource::parse(&trace)?, algo, rate, window, shared: Shared::resolve(&a.common, &f) };
    spec.validate()?;
    Ok(RunPlan { spec, name: a.name.clone().or(f.name), activity: a.activity || f.activity.unwrap_or(false) })
}

/// `sweep` flags merged with the config file.
pub struct SweepPlan {
    pub traces: Vec<TraceSource>,
    pub algos: Vec<Algorithm>,
    pub windows: Vec<usize>,
    pub rates: Vec<Rate>,
    pub shared: Shared,
    pub jobs: Option<usize>,
}

impl SweepPlan {
    /// Every run, traces outermost and rates innermost.
    pub fn specs(&self) -> Vec<RunSpec> {
        let mut out = Vec::new();
        for trace in &self.traces {
            for &algo in &self.algos {
                for &window in &self.windows {
                    for &rate in &self.rates {
                        out.push(RunSpec { trace: trace.clone(), algo, rate, window, shared: self.shared.clone() });
                    }
                }
            }
        }
        out
    }
}

fn pick<T: Clone>(flag: &[T], file: &Option<Vec<T>>) -> Option<Vec<T>> {
    if !flag.is_empty() {
        Some(flag.to_vec())
    } else {
        file.clone()
    }
}

pub fn resolve_sweep(a: &SweepArgs) -> Result<SweepPlan, CliError> {
    let f = FileConfig::load(a.common.config.as_deref())?;
    let traces = pick(&a.traces, &f.traces)
        .or_else(|| f.trace.clone().map(|t| vec![t]))
        .ok_or_else(|| CliError::Config("no --trace given".into()))?
        .iter()
        .map(|t| TraceSource::parse(t))
        .collect::<Result<Vec<_>, _>>()?;
    let algos = match pick(&a.algos, &f.algos).or_else(|| f.algo.clone().map(|x| vec![x])) {
        Some(names) => names.iter().map(|s| parse_algo(s)).collect::<Result<_, _>>()?,
        None => vec![Algorithm::EgoTrees, Algorithm::KMatching],
    };
    let rates = match (a.rates.is_empty(), &f.rates) {
        (false, _) => a.rates.iter().map(|r| parse_rate(r)).collect::<Result<_, _>>()?,
        (true, Some(r)) => r.clone(),
        (true, None) => DEFAULT_GRID.iter().map(|&r| Rate::every(r)).collect::<Result<_, _>>()?,
    };
    let windows = pick(&a.windows, &f.windows).unwrap_or_else(|| DEFAULT_GRID.to_vec());
    if traces.is_empty() || algos.is_empty() || rates.is_empty() || windows.is_empty() {
        return Err(CliError::Config("sweep grid is empty".into()));
    }
    let jobs = a.jobs.or(f.jobs);
    if jobs == Some(0) {
        return Err(CliError::Config("--jobs must be at least 1".into()));
    }
    let plan = SweepPlan { traces, algos, windows, rates, shared: Shared::resolve(&a.common, &f), jobs };
    plan.specs().iter().try_for_each(RunSpec::validate)?;
    Ok(plan)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_specs() {
        let s = TraceSource::parse("gen:stars,length=100,seed=3").unwrap();
        assert_eq!(s, TraceSource::Stars { shape: StarsShape::default(), length: 100, seed: 3 });
        assert_eq!(s.name(), "stars32x31-m100-s3");
        let z = TraceSource::parse("gen:zipf,n=64,exponent=1.5,length=10").unwrap();
        assert!(matches!(z, TraceSource::Zipf { n: 64, length: 10, seed: 0, .. }));
        assert!(TraceSource::parse("gen:uniform,length=10").is_err());
        assert!(TraceSource::parse("gen:stars,n=4").is_err());
        assert!(TraceSource::parse("gen:bogus").is_err());
        assert_eq!(TraceSource::parse("data/x.txt").unwrap().name(), "x");
    }

    #[test]
    fn fnv_reference_values() {
        assert_eq!(fnv1a(b""), 0xcbf2_9ce4_8422_2325);
        assert_eq!(fnv1a(b"a"), 0xaf63_dc4c_8601_ec8c);
    }

    #[test]
    fn run_seed_ignores_the_algorithm() {
        let shared = Shared {
            n: None,
            k: 4,
            seed: 9,
            warmup: None,
            bma: BmaConfig::default(),
            trials: 10,
            out_dir: "out".into(),
        };
        let spec = |algo, window| RunSpec {
            trace: TraceSource::parse("gen:stars,length=10").unwrap(),
            algo,
            rate: Rate::Never,
            window,
            shared: shared.clone(),
        };
        assert_eq!(spec(Algorithm::Bma, 5).run_seed(), spec(Algorithm::EgoTrees, 5).run_seed());
        assert_ne!(spec(Algorithm::Bma, 5).run_seed(), spec(Algorithm::Bma, 6).run_seed());
        assert_eq!(spec(Algorithm::Bma, 5).warmup(), 5);
    }
}
