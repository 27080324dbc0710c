//! Procedures composed from several propagation runs: consensus
//! clustering, hierarchical agglomeration and refinement, overlapping
//! covers, two-step structural equivalence and defensive-then-offensive
//! refinement.

use std::collections::{BTreeMap, HashMap};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::engine::{derive_seed, run, run_from, run_many, RunConfig};
use crate::error::{Error, Result};
use crate::graph::{
    connected_components, induced_subgraph, quotient_graph, split_into_components, Graph,
    GraphBuilder,
};
use crate::objectives::degeneracy_stats;
use crate::partition::{Cover, Partition};
use crate::rules::Rule;

pub const DEFAULT_CONSENSUS_THRESHOLD: f64 = 0.5;
pub const DEFAULT_CONSENSUS_ROUNDS: usize = 10;
pub const DEFAULT_MEMORY_ITERS: usize = 25;

/// Seed stream offsets so that pipeline stages never share run seeds.
const REFINE_STREAM: u64 = 1 << 32;
const OFFENSIVE_STREAM: u64 = 2 << 32;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConsensusResult {
    pub partition: Partition,
    pub rounds: usize,
    /// False when the round cap ran out; `partition` is then the most
    /// frequent outcome of the last round.
    pub converged: bool,
}

/// Repeated runs of `rule` folded into consensus graphs until all runs agree.
///
/// Each round runs the base method `runs` times on the current graph, then
/// replaces it by the graph of co-classification frequencies over the
/// current graph's edges, keeping only weights at or above `threshold`.
pub fn consensus(
    g: &Graph,
    rule: &Rule,
    cfg: &RunConfig,
    runs: usize,
    threshold: f64,
    max_rounds: usize,
) -> Result<ConsensusResult> {
    if runs < 2 {
        return Err(Error::param("consensus needs at least 2 runs"));
    }
    if !(threshold > 0.0 && threshold <= 1.0) {
        return Err(Error::param(format!(
            "threshold must lie in (0, 1], got {threshold}"
        )));
    }
    if max_rounds == 0 {
        return Err(Error::param("consensus needs at least one round"));
    }
    let n = g.node_count();
    let mut current = g.clone();
    let mut last = Vec::new();
    for round in 0..max_rounds {
        let round_cfg = cfg.clone().with_seed(derive_seed(cfg.seed, round as u64));
        let results = run_many(&current, rule, &round_cfg, runs)?;
        let parts: Vec<Partition> = results.into_iter().map(|r| r.partition).collect();
        if parts.iter().all(|p| *p == parts[0]) {
            return Ok(ConsensusResult {
                partition: parts[0].clone(),
                rounds: round + 1,
                converged: true,
            });
        }
        let mut edges = Vec::new();
        for i in 0..n {
            for &j in current.row(i).0 {
                if j <= i {
                    continue;
                }
                let together = parts
                    .iter()
                    .filter(|p| p.labels()[i] == p.labels()[j])
                    .count();
                let w = together as f64 / runs as f64;
                if w >= threshold {
                    edges.push((i, j, w));
                }
            }
        }
        current = GraphBuilder::new().nodes(n).build(&edges)?;
        last = parts;
    }
    Ok(ConsensusResult {
        partition: mode_partition(&last),
        rounds: max_rounds,
        converged: false,
    })
}

/// Most frequent partition; the earliest wins ties.
fn mode_partition(parts: &[Partition]) -> Partition {
    let mut counts: HashMap<&Partition, usize> = HashMap::new();
    for p in parts {
        *counts.entry(p).or_default() += 1;
    }
    let mut best = &parts[0];
    for p in parts {
        if counts[p] > counts[best] {
            best = p;
        }
    }
    best.clone()
}

/// Nested partitions: level 0 groups the original nodes, level `t` groups
/// the groups of level `t - 1` (in group-index order).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hierarchy {
    levels: Vec<Partition>,
}

impl Hierarchy {
    pub fn new(levels: Vec<Partition>) -> Result<Self> {
        for t in 1..levels.len() {
            if levels[t].len() != levels[t - 1].num_groups() {
                return Err(Error::NodeSetMismatch {
                    expected: levels[t - 1].num_groups(),
                    got: levels[t].len(),
                });
            }
        }
        Ok(Hierarchy { levels })
    }

    /// Rebuilds the levels from partitions of the original nodes, each
    /// coarsening the one before.
    pub fn from_lifted(lifted: &[Partition]) -> Result<Self> {
        let mut levels = Vec::with_capacity(lifted.len());
        for (t, p) in lifted.iter().enumerate() {
            if t == 0 {
                levels.push(p.clone());
                continue;
            }
            let prev = &lifted[t - 1];
            if !p.coarsens(prev) {
                return Err(Error::param(format!(
                    "level {t} does not coarsen level {}",
                    t - 1
                )));
            }
            let over: Vec<usize> = prev
                .groups()
                .iter()
                .map(|members| p.labels()[members[0]])
                .collect();
            levels.push(Partition::from_labels(&over));
        }
        Ok(Hierarchy { levels })
    }

    pub fn levels(&self) -> &[Partition] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// Level `t` expressed over the original nodes.
    pub fn lifted(&self, t: usize) -> Partition {
        let mut p = self.levels[0].clone();
        for level in &self.levels[1..=t] {
            p = p.lift(level);
        }
        p
    }

    pub fn lifted_levels(&self) -> Vec<Partition> {
        (0..self.len()).map(|t| self.lifted(t)).collect()
    }

    /// Graph each level partitions: `g` for level 0, then successive quotients.
    pub fn level_graphs(&self, g: &Graph) -> Vec<Graph> {
        let mut graphs = vec![g.clone()];
        for t in 1..self.len() {
            let next = quotient_graph(&graphs[t - 1], &self.levels[t - 1]);
            graphs.push(next);
        }
        graphs
    }
}

/// Propagation on successive meta-networks until a pass merges nothing.
pub fn hierarchy_agglomerate(g: &Graph, rule: &Rule, cfg: &RunConfig) -> Result<Hierarchy> {
    let mut levels: Vec<Partition> = Vec::new();
    let mut current = g.clone();
    loop {
        let seed = derive_seed(cfg.seed, levels.len() as u64);
        let p = run(&current, rule, &cfg.clone().with_seed(seed))?.partition;
        let merged = p.num_groups() < current.node_count();
        if merged || levels.is_empty() {
            levels.push(p.clone());
        }
        if !merged {
            break;
        }
        current = quotient_graph(&current, &p);
        if connected_components(&current).num_groups() == current.node_count() {
            break;
        }
    }
    Hierarchy::new(levels)
}

/// Re-runs propagation inside every group, top level first, and splits
/// groups that fall apart. Each level is intersected with the refined level
/// above so the result stays nested.
pub fn hierarchy_refine(
    g: &Graph,
    h: &Hierarchy,
    rule: &Rule,
    cfg: &RunConfig,
) -> Result<Hierarchy> {
    if h.is_empty() {
        return Ok(h.clone());
    }
    if h.levels()[0].len() != g.node_count() {
        return Err(Error::NodeSetMismatch {
            expected: g.node_count(),
            got: h.levels()[0].len(),
        });
    }
    let lifted = h.lifted_levels();
    let mut refined: Vec<Partition> = vec![Partition::singletons(0); lifted.len()];
    for t in (0..lifted.len()).rev() {
        let stream = derive_seed(cfg.seed, REFINE_STREAM + t as u64);
        let mut p = refine_groups(g, &lifted[t], rule, cfg, stream)?;
        if t + 1 < lifted.len() {
            let met = p.meet(&refined[t + 1]);
            p = split_into_components(g, met.labels());
        }
        refined[t] = p;
    }
    Hierarchy::from_lifted(&refined)
}

/// Runs `rule` on each group's induced subgraph and replaces the group by
/// the groups found there.
fn refine_groups(
    g: &Graph,
    p: &Partition,
    rule: &Rule,
    cfg: &RunConfig,
    stream: u64,
) -> Result<Partition> {
    let mut labels: Vec<(usize, usize)> = p.labels().iter().map(|&l| (l, 0)).collect();
    for (k, members) in p.groups().iter().enumerate() {
        if members.len() < 2 {
            continue;
        }
        let (sub, map) = induced_subgraph(g, members)?;
        let sub_cfg = cfg.clone().with_seed(derive_seed(stream, k as u64));
        let r = run(&sub, rule, &sub_cfg)?;
        for (local, &orig) in map.to_original.iter().enumerate() {
            labels[orig].1 = r.partition.labels()[local];
        }
    }
    let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
    let flat: Vec<usize> = labels
        .iter()
        .map(|key| {
            let next = ids.len();
            *ids.entry(*key).or_insert(next)
        })
        .collect();
    Ok(Partition::from_labels(&flat))
}

/// Per-node affiliation threshold for overlapping propagation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CopraMode {
    /// Keep affiliations of at least `1/ν`, so at most `ν` labels per node.
    MaxGroups(usize),
    /// Keep affiliations of at least `ρ` times the node's largest one.
    Relative(f64),
}

impl CopraMode {
    fn validate(self) -> Result<()> {
        match self {
            CopraMode::MaxGroups(nu) if nu < 1 => Err(Error::param("nu must be at least 1")),
            CopraMode::Relative(r) if !(r > 0.0 && r <= 1.0) => {
                Err(Error::param(format!("rho must lie in (0, 1], got {r}")))
            }
            _ => Ok(()),
        }
    }
}

/// Affiliation-vector propagation. Nodes update in a fresh random order
/// each iteration and read their neighbors' current vectors.
#[derive(Debug, Clone)]
pub struct Copra<'g> {
    g: &'g Graph,
    mode: CopraMode,
    affiliations: Vec<Vec<(usize, f64)>>,
    rng: ChaCha8Rng,
    iterations: usize,
}

pub const COPRA_TOLERANCE: f64 = 1e-6;

impl<'g> Copra<'g> {
    pub fn new(g: &'g Graph, mode: CopraMode, seed: u64) -> Result<Self> {
        mode.validate()?;
        Ok(Copra {
            g,
            mode,
            affiliations: (0..g.node_count()).map(|i| vec![(i, 1.0)]).collect(),
            rng: ChaCha8Rng::seed_from_u64(seed),
            iterations: 0,
        })
    }

    /// Current sorted `(label, weight)` lists, each summing to 1.
    pub fn affiliations(&self) -> &[Vec<(usize, f64)>] {
        &self.affiliations
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    /// One sweep over all nodes; returns the largest affiliation change.
    pub fn step(&mut self) -> f64 {
        let n = self.g.node_count();
        let mut acc = vec![0.0; n];
        let mut touched = Vec::new();
        let mut change: f64 = 0.0;
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut self.rng);
        for i in order {
            let mut total = 0.0;
            for (j, w) in self.g.neighbors(i) {
                total += w;
                for &(l, r) in &self.affiliations[j] {
                    if acc[l] == 0.0 {
                        touched.push(l);
                    }
                    acc[l] += w * r;
                }
            }
            touched.sort_unstable();
            let mut raw: Vec<(usize, f64)> = touched.iter().map(|&l| (l, acc[l] / total)).collect();
            for &l in &touched {
                acc[l] = 0.0;
            }
            touched.clear();
            raw.retain(|e| e.1 > 0.0);
            let new = if total > 0.0 && !raw.is_empty() {
                self.threshold(raw)
            } else {
                self.affiliations[i].clone()
            };
            change = change.max(max_difference(&self.affiliations[i], &new));
            self.affiliations[i] = new;
        }
        self.iterations += 1;
        change
    }

    fn threshold(&mut self, raw: Vec<(usize, f64)>) -> Vec<(usize, f64)> {
        let max = raw.iter().map(|e| e.1).fold(0.0, f64::max);
        let cut = match self.mode {
            CopraMode::MaxGroups(nu) => 1.0 / nu as f64,
            CopraMode::Relative(r) => r * max,
        };
        let mut kept: Vec<(usize, f64)> = raw.iter().copied().filter(|e| e.1 >= cut).collect();
        if kept.is_empty() {
            let best: Vec<usize> = raw
                .iter()
                .filter(|e| e.1 >= max * (1.0 - 1e-12))
                .map(|e| e.0)
                .collect();
            kept = vec![(*best.choose(&mut self.rng).unwrap(), 1.0)];
        }
        let total: f64 = kept.iter().map(|e| e.1).sum();
        kept.iter_mut().for_each(|e| e.1 /= total);
        kept
    }

    /// Steps until the change drops below [`COPRA_TOLERANCE`] or `max_iters`.
    pub fn run(mut self, max_iters: usize) -> CoverResult {
        let mut converged = false;
        while self.iterations < max_iters {
            if self.step() < COPRA_TOLERANCE {
                converged = true;
                break;
            }
        }
        CoverResult {
            cover: split_cover(self.g, &self.affiliations),
            iterations: self.iterations,
            converged,
        }
    }
}

fn max_difference(a: &[(usize, f64)], b: &[(usize, f64)]) -> f64 {
    let mut out: f64 = 0.0;
    let (mut x, mut y) = (0, 0);
    while x < a.len() || y < b.len() {
        let la = a.get(x).map_or(usize::MAX, |e| e.0);
        let lb = b.get(y).map_or(usize::MAX, |e| e.0);
        if la == lb {
            out = out.max((a[x].1 - b[y].1).abs());
            x += 1;
            y += 1;
        } else if la < lb {
            out = out.max(a[x].1);
            x += 1;
        } else {
            out = out.max(b[y].1);
            y += 1;
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverResult {
    pub cover: Cover,
    pub iterations: usize,
    pub converged: bool,
}

/// Overlapping groups by affiliation-vector propagation.
pub fn copra(g: &Graph, mode: CopraMode, max_iters: usize, seed: u64) -> Result<CoverResult> {
    Ok(Copra::new(g, mode, seed)?.run(max_iters))
}

/// Turns per-node label affiliations into a cover whose groups are the
/// connected parts of each label's support. Groups with identical members
/// are merged, groups strictly inside another group are dropped, and the
/// rest are numbered by their member lists.
fn split_cover(g: &Graph, affiliations: &[Vec<(usize, f64)>]) -> Cover {
    let n = g.node_count();
    let mut by_label: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, a) in affiliations.iter().enumerate() {
        for &(l, _) in a {
            by_label.entry(l).or_default().push(i);
        }
    }
    let mut in_label = vec![usize::MAX; n];
    let mut seen = vec![usize::MAX; n];
    // (members, per-member weights)
    let mut groups: BTreeMap<Vec<usize>, Vec<f64>> = BTreeMap::new();
    for (&l, members) in &by_label {
        for &v in members {
            in_label[v] = l;
        }
        for &start in members {
            if seen[start] == l {
                continue;
            }
            seen[start] = l;
            let mut comp = vec![start];
            let mut head = 0;
            while head < comp.len() {
                let u = comp[head];
                head += 1;
                for &v in g.row(u).0 {
                    if in_label[v] == l && seen[v] != l {
                        seen[v] = l;
                        comp.push(v);
                    }
                }
            }
            comp.sort_unstable();
            let weights: Vec<f64> = comp
                .iter()
                .map(|&v| weight_of(&affiliations[v], l))
                .collect();
            match groups.get_mut(&comp) {
                Some(ws) => ws.iter_mut().zip(&weights).for_each(|(a, b)| *a += b),
                None => {
                    groups.insert(comp, weights);
                }
            }
        }
        for &v in members {
            in_label[v] = usize::MAX;
        }
    }
    let groups = drop_nested(groups.into_iter().collect(), n);
    let mut out: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for (id, (members, weights)) in groups.into_iter().enumerate() {
        for (v, w) in members.into_iter().zip(weights) {
            out[v].push((id, w));
        }
    }
    Cover::new(out)
}

/// Removes groups whose members all belong to one larger group.
fn drop_nested(groups: Vec<(Vec<usize>, Vec<f64>)>, n: usize) -> Vec<(Vec<usize>, Vec<f64>)> {
    let mut member_of: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (id, (members, _)) in groups.iter().enumerate() {
        for &v in members {
            member_of[v].push(id);
        }
    }
    let nested = |id: usize| {
        let members = &groups[id].0;
        member_of[members[0]].iter().any(|&other| {
            other != id
                && groups[other].0.len() > members.len()
                && members.iter().all(|v| member_of[*v].contains(&other))
        })
    };
    let keep: Vec<bool> = (0..groups.len()).map(|id| !nested(id)).collect();
    groups
        .into_iter()
        .zip(keep)
        .filter_map(|(g, k)| k.then_some(g))
        .collect()
}

fn weight_of(a: &[(usize, f64)], label: usize) -> f64 {
    a.iter().find(|e| e.0 == label).map_or(0.0, |e| e.1)
}

/// Speaker-listener propagation with per-node label memories.
///
/// Every iteration visits the nodes in a fresh random order; each neighbor
/// of the visited node speaks a label drawn from its memory and the node
/// stores the heaviest spoken label. Labels held in at least a fraction
/// `r` of a node's memory form its cover entry.
pub fn memory_lpa(g: &Graph, iterations: usize, r: f64, seed: u64) -> Result<CoverResult> {
    if iterations < 1 {
        return Err(Error::param(
            "memory propagation needs at least one iteration",
        ));
    }
    if !(r > 0.0 && r <= 1.0) {
        return Err(Error::param(format!(
            "frequency threshold must lie in (0, 1], got {r}"
        )));
    }
    let n = g.node_count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut memory: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    let mut order: Vec<usize> = (0..n).collect();
    let mut heard: Vec<(usize, f64)> = Vec::new();
    for _ in 0..iterations {
        order.shuffle(&mut rng);
        for &i in &order {
            heard.clear();
            for (j, w) in g.neighbors(i) {
                let spoken = *memory[j].choose(&mut rng).unwrap();
                match heard.iter_mut().find(|e| e.0 == spoken) {
                    Some(e) => e.1 += w,
                    None => heard.push((spoken, w)),
                }
            }
            if heard.is_empty() {
                continue;
            }
            let max = heard.iter().map(|e| e.1).fold(f64::NEG_INFINITY, f64::max);
            let mut best: Vec<usize> = heard.iter().filter(|e| e.1 == max).map(|e| e.0).collect();
            best.sort_unstable();
            let pick = best[rng.gen_range(0..best.len())];
            memory[i].push(pick);
        }
    }
    let affiliations: Vec<Vec<(usize, f64)>> = memory
        .iter()
        .map(|mem| {
            let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
            for &l in mem {
                *counts.entry(l).or_default() += 1;
            }
            let total = mem.len() as f64;
            let mut kept: Vec<(usize, f64)> = counts
                .iter()
                .map(|(&l, &c)| (l, c as f64 / total))
                .filter(|e| e.1 >= r)
                .collect();
            if kept.is_empty() {
                let top = counts.values().copied().max().unwrap();
                let l = *counts.iter().find(|e| *e.1 == top).unwrap().0;
                kept.push((l, 1.0));
            }
            let sum: f64 = kept.iter().map(|e| e.1).sum();
            kept.iter_mut().for_each(|e| e.1 /= sum);
            kept
        })
        .collect();
    Ok(CoverResult {
        cover: split_cover(g, &affiliations),
        iterations,
        converged: true,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwoStepResult {
    /// Groups from direct transport alone.
    pub communities: Partition,
    /// Each community split by two-hop transport.
    pub partition: Partition,
}

/// Direct-transport groups, each refined by pure two-hop propagation.
pub fn two_step_equivalence(g: &Graph, cfg: &RunConfig) -> Result<TwoStepResult> {
    let communities = run(g, &Rule::GeneralTau { tau: 1.0 }, cfg)?.partition;
    let stream = derive_seed(cfg.seed, REFINE_STREAM);
    let partition = refine_groups(g, &communities, &Rule::GeneralTau { tau: 0.0 }, cfg, stream)?;
    Ok(TwoStepResult {
        communities,
        partition,
    })
}

pub const STABILITY_TOLERANCE: f64 = 0.01;
pub const MAX_OFFENSIVE_ROUNDS: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DefensiveOffensiveResult {
    pub defensive: Partition,
    pub partition: Partition,
    pub offensive_rounds: usize,
}

/// Defensive propagation followed by offensive runs seeded with the current
/// groups, until the tiny-group and largest-group fractions settle.
pub fn defensive_then_offensive(g: &Graph, cfg: &RunConfig) -> Result<DefensiveOffensiveResult> {
    let defensive = run(g, &Rule::Defensive, cfg)?.partition;
    let mut current = defensive.clone();
    let mut stats = degeneracy_stats(&current);
    let mut rounds = 0;
    while rounds < MAX_OFFENSIVE_ROUNDS {
        let seed = derive_seed(cfg.seed, OFFENSIVE_STREAM + rounds as u64);
        let next = run_from(
            g,
            &Rule::Offensive,
            &cfg.clone().with_seed(seed),
            current.labels().to_vec(),
        )?
        .partition;
        rounds += 1;
        let next_stats = degeneracy_stats(&next);
        current = next;
        let settled = (next_stats.0 - stats.0).abs() < STABILITY_TOLERANCE
            && (next_stats.1 - stats.1).abs() < STABILITY_TOLERANCE;
        stats = next_stats;
        if settled {
            break;
        }
    }
    Ok(DefensiveOffensiveResult {
        defensive,
        partition: current,
        offensive_rounds: rounds,
    })
}
