//! Seeded benchmark graphs.
//!
//! Random generators draw from a ChaCha stream seeded by the caller, so a
//! seed always reproduces the same graph. Block-structured graphs are
//! sampled by geometric skipping over candidate pairs, which costs time
//! proportional to the number of edges rather than node pairs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphBuilder};
use crate::partition::{Cover, Partition};

/// Calls `emit(k)` for each index `k < total` independently with probability `p`.
fn bernoulli_indices(total: u64, p: f64, rng: &mut ChaCha8Rng, mut emit: impl FnMut(u64)) {
    if total == 0 || p <= 0.0 {
        return;
    }
    if p >= 1.0 {
        (0..total).for_each(emit);
        return;
    }
    let log_q = (1.0 - p).ln();
    let mut k: i128 = -1;
    loop {
        let r: f64 = rng.gen();
        let skip = ((1.0 - r).ln() / log_q).floor();
        if !skip.is_finite() || skip >= total as f64 {
            return;
        }
        k += 1 + skip as i128;
        if k >= total as i128 {
            return;
        }
        emit(k as u64);
    }
}

/// Pair `(v, w)` with `w < v` for triangular index `k`.
fn triangular_pair(k: u64) -> (u64, u64) {
    let mut v = ((1.0 + (1.0 + 8.0 * k as f64).sqrt()) / 2.0).floor() as u64;
    while v * (v - 1) / 2 > k {
        v -= 1;
    }
    while (v + 1) * v / 2 <= k {
        v += 1;
    }
    (v, k - v * (v - 1) / 2)
}

/// Samples a simple graph where nodes in blocks `a` and `b` connect with
/// probability `prob(a, b)`. Blocks are contiguous id ranges of `sizes`.
fn block_model(
    sizes: &[usize],
    prob: impl Fn(usize, usize) -> f64,
    rng: &mut ChaCha8Rng,
) -> Result<Graph> {
    let mut starts = Vec::with_capacity(sizes.len());
    let mut n = 0;
    for &s in sizes {
        starts.push(n);
        n += s;
    }
    let mut edges = Vec::new();
    for a in 0..sizes.len() {
        for b in a..sizes.len() {
            let p = prob(a, b);
            if a == b {
                let total = (sizes[a] as u64) * (sizes[a] as u64).saturating_sub(1) / 2;
                bernoulli_indices(total, p, rng, |k| {
                    let (v, w) = triangular_pair(k);
                    edges.push((starts[a] + v as usize, starts[a] + w as usize, 1.0));
                });
            } else {
                let cols = sizes[b] as u64;
                let total = sizes[a] as u64 * cols;
                bernoulli_indices(total, p, rng, |k| {
                    edges.push((
                        starts[a] + (k / cols) as usize,
                        starts[b] + (k % cols) as usize,
                        1.0,
                    ));
                });
            }
        }
    }
    GraphBuilder::new().nodes(n).build(&edges)
}

/// `G(n, p)` with `p = avg_degree / (n - 1)`.
pub fn erdos_renyi(n: usize, avg_degree: f64, seed: u64) -> Result<Graph> {
    if !(avg_degree >= 0.0) {
        return Err(Error::param("average degree must be non-negative"));
    }
    if n > 0 && avg_degree >= n as f64 {
        return Err(Error::param(format!(
            "average degree {avg_degree} must be below n = {n}"
        )));
    }
    if n < 2 {
        return Ok(Graph::empty(n));
    }
    let p = avg_degree / (n - 1) as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    block_model(&[n], |_, _| p, &mut rng)
}

/// Equal-size groups with homogeneous expected degree and an expected
/// fraction `mu` of each node's edges leaving its group.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlantedSpec {
    pub n: usize,
    pub groups: usize,
    pub avg_degree: f64,
    pub mu: f64,
    pub seed: u64,
}

impl PlantedSpec {
    /// Four groups as in the classic 128-node benchmark.
    pub fn four_groups(n: usize, avg_degree: f64, mu: f64, seed: u64) -> Self {
        PlantedSpec {
            n,
            groups: 4,
            avg_degree,
            mu,
            seed,
        }
    }

    /// `(p_in, p_out)`, or an error when either falls outside `[0, 1]`.
    pub fn probabilities(&self) -> Result<(f64, f64)> {
        if self.groups == 0 || self.n % self.groups != 0 {
            return Err(Error::param(format!(
                "{} nodes cannot be split into {} equal groups",
                self.n, self.groups
            )));
        }
        if !(0.0..=1.0).contains(&self.mu) {
            return Err(Error::param(format!(
                "mu must lie in [0, 1], got {}",
                self.mu
            )));
        }
        if !(self.avg_degree >= 0.0) || self.avg_degree >= self.n as f64 {
            return Err(Error::param("average degree must lie in [0, n)"));
        }
        let size = self.n / self.groups;
        let inside = (size - 1) as f64;
        let outside = (self.n - size) as f64;
        let want_in = self.avg_degree * (1.0 - self.mu);
        let want_out = self.avg_degree * self.mu;
        let p_in = if want_in == 0.0 {
            0.0
        } else {
            want_in / inside
        };
        let p_out = if want_out == 0.0 {
            0.0
        } else {
            want_out / outside
        };
        if !(0.0..=1.0).contains(&p_in) || !(0.0..=1.0).contains(&p_out) {
            return Err(Error::param(format!(
                "infeasible planted partition: p_in = {p_in}, p_out = {p_out}"
            )));
        }
        Ok((p_in, p_out))
    }
}

/// Planted partition graph and its ground truth. Group `g` holds the
/// contiguous ids `g * n/q .. (g + 1) * n/q`.
pub fn planted_partition(spec: &PlantedSpec) -> Result<(Graph, Partition)> {
    let (p_in, p_out) = spec.probabilities()?;
    let size = spec.n / spec.groups;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let g = block_model(
        &vec![size; spec.groups],
        |a, b| if a == b { p_in } else { p_out },
        &mut rng,
    )?;
    let truth = Partition::from_labels(&(0..spec.n).map(|i| i / size).collect::<Vec<_>>());
    Ok((g, truth))
}

/// Two-level planted structure: `supergroups` blocks, each split into
/// `groups_per_super` equal groups. Expected degrees split into edges
/// inside the group, to sibling groups and to other supergroups.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NestedSpec {
    pub supergroups: usize,
    pub groups_per_super: usize,
    pub group_size: usize,
    pub degree_in: f64,
    pub degree_sibling: f64,
    pub degree_out: f64,
    pub seed: u64,
}

/// Nested planted graph with its fine and coarse ground truths.
pub fn nested_planted(spec: &NestedSpec) -> Result<(Graph, Partition, Partition)> {
    let q = spec.supergroups * spec.groups_per_super;
    if q == 0 || spec.group_size < 2 {
        return Err(Error::param(
            "nested planted graph needs groups of at least 2 nodes",
        ));
    }
    let n = q * spec.group_size;
    let super_size = spec.groups_per_super * spec.group_size;
    let ratio = |want: f64, pairs: usize| {
        if want == 0.0 {
            Ok(0.0)
        } else if pairs == 0 {
            Err(Error::param("no candidate pairs for requested degree"))
        } else {
            Ok(want / pairs as f64)
        }
    };
    let p1 = ratio(spec.degree_in, spec.group_size - 1)?;
    let p2 = ratio(spec.degree_sibling, super_size - spec.group_size)?;
    let p3 = ratio(spec.degree_out, n - super_size)?;
    if [p1, p2, p3].iter().any(|p| !(0.0..=1.0).contains(p)) {
        return Err(Error::param("infeasible nested planted partition"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let per = spec.groups_per_super;
    let g = block_model(
        &vec![spec.group_size; q],
        |a, b| {
            if a == b {
                p1
            } else if a / per == b / per {
                p2
            } else {
                p3
            }
        },
        &mut rng,
    )?;
    let fine = Partition::from_labels(&(0..n).map(|i| i / spec.group_size).collect::<Vec<_>>());
    let coarse = Partition::from_labels(&(0..n).map(|i| i / super_size).collect::<Vec<_>>());
    Ok((g, fine, coarse))
}

/// Lattice edges of a `rows x cols` triangular grid: right, down and
/// down-right neighbors. Node `(r, c)` has id `r * cols + c`.
pub fn triangular_grid_edges(rows: usize, cols: usize) -> Vec<(usize, usize)> {
    let id = |r: usize, c: usize| r * cols + c;
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                edges.push((id(r, c), id(r, c + 1)));
            }
            if r + 1 < rows {
                edges.push((id(r, c), id(r + 1, c)));
                if c + 1 < cols {
                    edges.push((id(r, c), id(r + 1, c + 1)));
                }
            }
        }
    }
    edges
}

/// Triangular grid with the listed lattice edges removed.
pub fn triangular_grid(rows: usize, cols: usize, removed: &[(usize, usize)]) -> Result<Graph> {
    let mut edges = triangular_grid_edges(rows, cols);
    for &(u, v) in removed {
        let key = (u.min(v), u.max(v));
        let pos = edges
            .iter()
            .position(|&e| e == key)
            .ok_or_else(|| Error::param(format!("({u}, {v}) is not a grid edge")))?;
        edges.swap_remove(pos);
    }
    Graph::from_pairs(rows * cols, &edges)
}

/// The 6 x 12 grid split into left and right halves by removing the four
/// middle-row horizontal edges that cross between columns 5 and 6.
pub fn split_grid_fixture() -> Graph {
    let cols = 12;
    let removed: Vec<_> = (1..5).map(|r| (r * cols + 5, r * cols + 6)).collect();
    triangular_grid(6, cols, &removed).expect("fixture edges exist")
}

/// Two `k`-cliques sharing `s` nodes; shared nodes are split evenly
/// between both groups in the ground-truth cover.
pub fn overlapping_cliques(k: usize, s: usize) -> Result<(Graph, Cover)> {
    if s >= k {
        return Err(Error::param(format!(
            "shared count {s} must be below clique size {k}"
        )));
    }
    let n = 2 * k - s;
    let second = k - s;
    let mut pairs = Vec::new();
    for range in [0..k, second..n] {
        let nodes: Vec<usize> = range.collect();
        for (a, &u) in nodes.iter().enumerate() {
            for &v in &nodes[a + 1..] {
                pairs.push((u, v));
            }
        }
    }
    pairs.sort_unstable();
    pairs.dedup();
    let g = Graph::from_pairs(n, &pairs)?;
    let cover = Cover::new(
        (0..n)
            .map(|i| {
                let mut a = Vec::new();
                if i < k {
                    a.push((0, 1.0));
                }
                if i >= second {
                    a.push((1, 1.0));
                }
                a
            })
            .collect(),
    );
    Ok((g, cover))
}

const KARATE: &str = include_str!("../data/karate.txt");

/// Zachary's 34-node karate club network.
pub fn karate_club() -> Graph {
    let pairs: Vec<(usize, usize)> = KARATE
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            let mut it = l.split_whitespace().map(|t| t.parse::<usize>().unwrap());
            (it.next().unwrap(), it.next().unwrap())
        })
        .collect();
    Graph::from_pairs(34, &pairs).unwrap()
}
