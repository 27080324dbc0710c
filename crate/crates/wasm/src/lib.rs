//! Browser bindings for the demo page in `www/`.
//!
//! The exported functions are thin wrappers over plain Rust functions so the
//! logic can be tested natively.

use labelprop::engine::{derive_seed, Propagator};
use labelprop::generators::{planted_partition, PlantedSpec};
use labelprop::objectives::nmi;
use labelprop::{Graph, Rule, RunConfig, Schedule};
use wasm_bindgen::prelude::*;

/// Every label assignment of one run on a planted graph, frame by frame.
#[wasm_bindgen]
pub struct Animation {
    nodes: usize,
    edges: Vec<u32>,
    truth: Vec<u32>,
    frames: Vec<u32>,
    nmi: Vec<f64>,
}

#[wasm_bindgen]
impl Animation {
    pub fn nodes(&self) -> usize {
        self.nodes
    }

    /// Flat `u, v` pairs.
    pub fn edges(&self) -> Vec<u32> {
        self.edges.clone()
    }

    pub fn truth(&self) -> Vec<u32> {
        self.truth.clone()
    }

    pub fn frame_count(&self) -> usize {
        self.nmi.len()
    }

    pub fn frame(&self, t: usize) -> Vec<u32> {
        self.frames[t * self.nodes..(t + 1) * self.nodes].to_vec()
    }

    /// NMI against the planted groups after each frame.
    pub fn nmi(&self) -> Vec<f64> {
        self.nmi.clone()
    }
}

fn schedule(name: &str) -> Result<Schedule, String> {
    match name {
        "sync" => Ok(Schedule::Sync),
        "async" => Ok(Schedule::Async),
        "semisync" => Ok(Schedule::SemiSync),
        _ => Err(format!("unknown schedule '{name}'")),
    }
}

fn to_u32(xs: &[usize]) -> Vec<u32> {
    xs.iter().map(|&x| x as u32).collect()
}

pub fn animate_planted(n: usize, mu: f64, sched: &str, seed: u64) -> Result<Animation, String> {
    let (g, truth) = planted_partition(&PlantedSpec::four_groups(n, 16.0, mu, seed))
        .map_err(|e| e.to_string())?;
    let cfg = RunConfig::default()
        .with_seed(derive_seed(seed, 1))
        .with_schedule(schedule(sched)?);
    let mut prop = Propagator::new(&g, Rule::Standard, cfg.clone()).map_err(|e| e.to_string())?;
    let mut frames = to_u32(prop.labels());
    let score =
        |labels: &[usize]| nmi(&labelprop::Partition::from_labels(labels), &truth).unwrap_or(0.0);
    let mut scores = vec![score(prop.labels())];
    while prop.iterations() < cfg.max_iters {
        let changed = prop.step();
        frames.extend(to_u32(prop.labels()));
        scores.push(score(prop.labels()));
        if changed == 0 {
            break;
        }
    }
    let edges = g
        .edges()
        .iter()
        .flat_map(|&(u, v, _)| [u as u32, v as u32])
        .collect();
    Ok(Animation {
        nodes: n,
        edges,
        truth: to_u32(truth.labels()),
        frames,
        nmi: scores,
    })
}

/// Mean NMI for each mixing value, `runs` planted graphs per point.
pub fn sweep(n: usize, mus: &[f64], runs: usize, seed: u64) -> Result<Vec<f64>, String> {
    let mut out = Vec::with_capacity(mus.len());
    for &mu in mus {
        let mut total = 0.0;
        for r in 0..runs as u64 {
            let spec = PlantedSpec::four_groups(n, 16.0, mu, derive_seed(seed, r));
            let (g, truth) = planted_partition(&spec).map_err(|e| e.to_string())?;
            let cfg = RunConfig::default().with_seed(derive_seed(seed, (1 << 40) + r));
            let p = labelprop::run(&g, &Rule::Standard, &cfg)
                .map_err(|e| e.to_string())?
                .partition;
            total += nmi(&truth, &p).map_err(|e| e.to_string())?;
        }
        out.push(total / runs.max(1) as f64);
    }
    Ok(out)
}

/// Group counts per iteration on the complete bipartite graph K_{k,k}.
pub fn bipartite_groups(
    k: usize,
    sched: &str,
    iters: usize,
    seed: u64,
) -> Result<Vec<u32>, String> {
    let pairs: Vec<(usize, usize)> = (0..k)
        .flat_map(|i| (k..2 * k).map(move |j| (i, j)))
        .collect();
    let g = Graph::from_pairs(2 * k, &pairs).map_err(|e| e.to_string())?;
    let cfg = RunConfig::default()
        .with_seed(seed)
        .with_schedule(schedule(sched)?)
        .with_tie(labelprop::TiePolicy::Random);
    let mut prop = Propagator::new(&g, Rule::Standard, cfg).map_err(|e| e.to_string())?;
    let groups = |labels: &[usize]| {
        let mut l = labels.to_vec();
        l.sort_unstable();
        l.dedup();
        l.len() as u32
    };
    let mut out = vec![groups(prop.labels())];
    for _ in 0..iters {
        prop.step();
        out.push(groups(prop.labels()));
    }
    Ok(out)
}

#[wasm_bindgen(js_name = animatePlanted)]
pub fn animate_planted_js(
    n: usize,
    mu: f64,
    schedule: &str,
    seed: u32,
) -> Result<Animation, JsError> {
    animate_planted(n, mu, schedule, seed as u64).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = muSweep)]
pub fn mu_sweep_js(n: usize, mus: Vec<f64>, runs: usize, seed: u32) -> Result<Vec<f64>, JsError> {
    sweep(n, &mus, runs, seed as u64).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = bipartiteGroups)]
pub fn bipartite_groups_js(
    k: usize,
    schedule: &str,
    iters: usize,
    seed: u32,
) -> Result<Vec<u32>, JsError> {
    bipartite_groups(k, schedule, iters, seed as u64).map_err(|e| JsError::new(&e))
}
