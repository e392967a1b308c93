use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use tmtnet::demand::{
    generate_forest_demand, generate_stars, generate_uniform_pairs, generate_zipf_pairs, trace_stats, StarsShape,
    Trace, TraceStats,
};
use tmtnet::eval::{
    path_length_distribution, window_activity, write_activity_csv, write_histogram_csv, write_summary_csv,
    write_summary_json, SummaryJson, SummaryRow,
};
use tmtnet::graph::{decompose_to_matchings, Network};
use tmtnet::online::{run, Rate};

use crate::args::{DecomposeArgs, Generate, RunArgs, StatsArgs, SweepArgs};
use crate::settings::{resolve_run, resolve_sweep, RunSpec};
use crate::CliError;

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.to_path_buf(), source }
}

fn print_stats(s: &TraceStats) {
    println!("length,nodes,edges,avg_degree,min_degree,max_degree,dropped_self_loops");
    println!(
        "{},{},{},{:.4},{},{},{}",
        s.length, s.nodes, s.edges, s.avg_degree, s.min_degree, s.max_degree, s.dropped_self_loops
    );
}

pub fn generate(g: Generate) -> Result<(), CliError> {
    let (trace, out) = match g {
        Generate::Stars { stars, leaves, n, uniform_leaves, common } => {
            let zipf = !uniform_leaves;
            let shape = match n {
                Some(n) => StarsShape::with_nodes(stars, leaves, zipf, n)?,
                None => StarsShape { stars, leaves, zipf },
            };
            (generate_stars(shape, common.length, common.seed)?, common.out)
        }
        Generate::Uniform { n, common } => (generate_uniform_pairs(n, common.length, common.seed)?, common.out),
        Generate::Zipf { n, exponent, common } => {
            (generate_zipf_pairs(n, common.length, exponent, common.seed)?, common.out)
        }
        Generate::Forest { n, arity, seed, out } => {
            let d = generate_forest_demand(n, arity, seed)?;
            d.save(&out)?;
            println!("{}: {} pairs over {n} nodes", out.display(), d.support());
            return Ok(());
        }
    };
    trace.save(&out)?;
    print_stats(&trace_stats(&trace));
    Ok(())
}

pub fn stats(a: StatsArgs) -> Result<(), CliError> {
    let trace = match a.n {
        Some(n) => Trace::load(&a.trace, n)?,
        None => Trace::load_inferred(&a.trace)?,
    };
    let s = trace_stats(&trace);
    if a.json {
        println!("{}", serde_json::to_string_pretty(&s).expect("stats serialize"));
    } else {
        print_stats(&s);
    }
    Ok(())
}

/// Serve the trace for `spec` and summarize it. `trace` must come from
/// `spec.trace`.
fn execute(spec: &RunSpec, trace: &Trace) -> Result<(SummaryRow, tmtnet::online::RunRecord), CliError> {
    let cfg = spec.online_config(trace.n());
    let record = run(trace, &cfg)?;
    let mut row = SummaryRow::new(&record, &spec.trace.name(), spec.warmup())?;
    // Report the seed the user chose; the per-run seed is derived from it.
    row.seed = spec.shared.seed;
    Ok((row, record))
}

pub fn run_cmd(a: RunArgs) -> Result<(), CliError> {
    let plan = resolve_run(&a)?;
    let spec = &plan.spec;
    let trace = spec.trace.load(spec.shared.n)?;
    let (row, record) = execute(spec, &trace)?;
    let dir = &spec.shared.out_dir;
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let name = plan.name.clone().unwrap_or_else(|| spec.default_name());
    let file = |suffix: &str| dir.join(format!("{name}{suffix}"));
    write_summary_csv(&file(".summary.csv"), std::slice::from_ref(&row))?;
    write_summary_json(&file(".json"), &SummaryJson::new(&row, spec.algo.is_reconstructed()))?;
    write_histogram_csv(&file(".hist.csv"), &path_length_distribution(&record, spec.warmup())?)?;
    if plan.activity {
        let w = match spec.rate {
            Rate::Every(r) => r.get(),
            Rate::Never => spec.window,
        };
        write_activity_csv(&file(".activity.csv"), &window_activity(&trace, w)?)?;
    }
    println!(
        "{} on {}: apl {:.4} (all requests {:.4}), {} reconfigurations -> {}",
        row.algo,
        row.trace,
        row.apl,
        row.apl_no_warmup,
        row.reconfigs,
        file(".summary.csv").display()
    );
    Ok(())
}

pub fn sweep(a: SweepArgs) -> Result<(), CliError> {
    let plan = resolve_sweep(&a)?;
    let traces: Vec<Trace> = plan.traces.iter().map(|t| t.load(plan.shared.n)).collect::<Result<_, _>>()?;
    let by_name: BTreeMap<String, &Trace> = plan.traces.iter().map(|t| t.name()).zip(&traces).collect();
    let specs = plan.specs();
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = plan.jobs {
        pool = pool.num_threads(j);
    }
    let pool = pool.build().map_err(|e| CliError::Config(format!("worker pool: {e}")))?;
    let results: Vec<Result<SummaryRow, CliError>> =
        pool.install(|| specs.par_iter().map(|s| execute(s, by_name[&s.trace.name()]).map(|(row, _)| row)).collect());

    let mut rows = Vec::new();
    let mut failed = Vec::new();
    for (spec, r) in specs.iter().zip(results) {
        match r {
            Ok(row) => rows.push(row),
            Err(e) => failed.push(format!("{}: {e}", spec.default_name())),
        }
    }
    let dir = &plan.shared.out_dir;
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let summary = dir.join("sweep.csv");
    write_summary_csv(&summary, &rows)?;
    let best = best_points(&rows);
    write_best(&dir.join("sweep.best.csv"), &best)?;
    println!("trace,algo,W,R,apl");
    for b in &best {
        println!("{},{},{},{},{:.4}", b.trace, b.algo, b.window, b.rate, b.apl);
    }
    println!("{} runs -> {}", rows.len(), summary.display());
    if failed.is_empty() {
        Ok(())
    } else {
        for f in &failed {
            eprintln!("failed: {f}");
        }
        Err(CliError::Failed(failed.len()))
    }
}

/// Lowest `apl` per (trace, algorithm); the first grid point wins ties.
fn best_points(rows: &[SummaryRow]) -> Vec<&SummaryRow> {
    let mut best: BTreeMap<(&str, &str), &SummaryRow> = BTreeMap::new();
    for r in rows {
        best.entry((&r.trace, &r.algo))
            .and_modify(|b| {
                if r.apl < b.apl {
                    *b = r
                }
            })
            .or_insert(r);
    }
    best.into_values().collect()
}

fn write_best(path: &Path, best: &[&SummaryRow]) -> Result<(), CliError> {
    let mut text = String::from("trace,algo,W,R,apl\n");
    for b in best {
        text.push_str(&format!("{},{},{},{},{}\n", b.trace, b.algo, b.window, b.rate, b.apl));
    }
    fs::write(path, text).map_err(io_err(path))
}

pub fn decompose(a: DecomposeArgs) -> Result<(), CliError> {
    let text = fs::read_to_string(&a.network).map_err(io_err(&a.network))?;
    let g: Network =
        serde_json::from_str(&text).map_err(|source| CliError::Json { path: a.network.clone(), source })?;
    let m = decompose_to_matchings(&g)?;
    let mut json = serde_json::to_string(&m).expect("matchings serialize");
    json.push('\n');
    match a.out {
        Some(p) => fs::write(&p, json).map_err(io_err(&p)),
        None => io::stdout().write_all(json.as_bytes()).map_err(io_err(&PathBuf::from("<stdout>"))),
    }
}
