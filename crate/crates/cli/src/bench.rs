//! Benchmark sweeps over planted partitions.
//!
//! Run `r` of every point uses graph seed `derive_seed(seed, r)` and
//! propagation seed `derive_seed(seed, RUN_STREAM + r)`, so points share
//! their random streams and the CSV is a pure function of the flags.

use std::fmt::Write as _;

use labelprop::engine::derive_seed;
use labelprop::generators::{planted_partition, PlantedSpec};
use labelprop::objectives::nmi;
use labelprop::pipelines;
use labelprop::{Graph, Partition, Rule, RunConfig};
use rayon::prelude::*;

use crate::args::{BenchmarkArgs, Method, SweepKind};
use crate::commands::{resolve_seed, write_output};
use crate::Failure;

const RUN_STREAM: u64 = 1 << 40;
const CONSENSUS_RUNS: usize = 25;

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Standard => "standard",
        Method::Defensive => "defensive",
        Method::Offensive => "offensive",
        Method::Balanced => "balanced",
        Method::Consensus => "consensus",
    }
}

fn detect(g: &Graph, m: Method, cfg: &RunConfig) -> labelprop::Result<Partition> {
    Ok(match m {
        Method::Standard => labelprop::run(g, &Rule::Standard, cfg)?.partition,
        Method::Defensive => labelprop::run(g, &Rule::Defensive, cfg)?.partition,
        Method::Offensive => pipelines::defensive_then_offensive(g, cfg)?.partition,
        Method::Balanced => labelprop::run(g, &balanced(), cfg)?.partition,
        Method::Consensus => {
            pipelines::consensus(
                g,
                &Rule::Standard,
                cfg,
                CONSENSUS_RUNS,
                pipelines::DEFAULT_CONSENSUS_THRESHOLD,
                pipelines::DEFAULT_CONSENSUS_ROUNDS,
            )?
            .partition
        }
    })
}

fn balanced() -> Rule {
    Rule::Balanced {
        gamma: 1.0,
        defensive: false,
    }
}

/// Mean and standard error of the mean.
fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

pub fn benchmark(a: BenchmarkArgs) -> Result<(), Failure> {
    let seed = resolve_seed(a.seed)?;
    if a.runs == 0 {
        return Err(Failure::Usage("--runs must be at least 1".into()));
    }
    let csv = match a.sweep {
        SweepKind::Mu => mu_sweep(&a, seed)?,
        SweepKind::Size => size_sweep(&a, seed)?,
    };
    write_output(a.output.as_deref(), &csv)
}

fn mu_sweep(a: &BenchmarkArgs, seed: u64) -> Result<String, Failure> {
    let mus: Vec<f64> = if a.mus.is_empty() {
        (0..=10).map(|i| i as f64 / 20.0).collect()
    } else {
        a.mus.clone()
    };
    let mut out = String::from("mu,method,mean_nmi,stderr\n");
    for &mu in &mus {
        let instances = (0..a.runs)
            .into_par_iter()
            .map(|r| {
                planted_partition(&PlantedSpec {
                    n: a.n,
                    groups: a.groups,
                    avg_degree: a.degree,
                    mu,
                    seed: derive_seed(seed, r as u64),
                })
            })
            .collect::<labelprop::Result<Vec<_>>>()?;
        for &m in &a.methods {
            let scores = instances
                .par_iter()
                .enumerate()
                .map(|(r, (g, truth))| {
                    let cfg =
                        RunConfig::default().with_seed(derive_seed(seed, RUN_STREAM + r as u64));
                    nmi(truth, &detect(g, m, &cfg)?)
                })
                .collect::<labelprop::Result<Vec<_>>>()?;
            let (mean, se) = mean_stderr(&scores);
            writeln!(out, "{mu},{},{mean:.6},{se:.6}", method_name(m)).unwrap();
        }
    }
    Ok(out)
}

fn size_sweep(a: &BenchmarkArgs, seed: u64) -> Result<String, Failure> {
    if a.methods.contains(&Method::Consensus) {
        return Err(Failure::Usage(
            "size sweeps count iterations of single runs; drop consensus".into(),
        ));
    }
    let mut out = String::from("n,edges,method,mean_iterations,stderr\n");
    for &n in &a.sizes {
        if a.group_size == 0 || n % a.group_size != 0 {
            return Err(Failure::Usage(format!(
                "size {n} is not a multiple of --group-size {}",
                a.group_size
            )));
        }
        let graphs = (0..a.runs)
            .into_par_iter()
            .map(|r| {
                planted_partition(&PlantedSpec {
                    n,
                    groups: n / a.group_size,
                    avg_degree: a.degree,
                    mu: a.mu,
                    seed: derive_seed(seed, r as u64),
                })
                .map(|(g, _)| g)
            })
            .collect::<labelprop::Result<Vec<_>>>()?;
        let edges = graphs.iter().map(|g| g.total_weight()).sum::<f64>() / graphs.len() as f64;
        for &m in &a.methods {
            let rule = match m {
                Method::Defensive => Rule::Defensive,
                Method::Offensive => Rule::Offensive,
                Method::Balanced => balanced(),
                _ => Rule::Standard,
            };
            let iters = graphs
                .par_iter()
                .enumerate()
                .map(|(r, g)| {
                    let cfg =
                        RunConfig::default().with_seed(derive_seed(seed, RUN_STREAM + r as u64));
                    Ok(labelprop::run(g, &rule, &cfg)?.iterations as f64)
                })
                .collect::<labelprop::Result<Vec<_>>>()?;
            let (mean, se) = mean_stderr(&iters);
            writeln!(out, "{n},{edges:.1},{},{mean:.6},{se:.6}", method_name(m)).unwrap();
        }
    }
    Ok(out)
}
