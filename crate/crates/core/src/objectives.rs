//! Objectives and partition quality measures.
//!
//! All pair sums run over ordered pairs `(i, j)`, so an edge contributes
//! twice and a loop `W_ii` also contributes twice, the same convention the
//! degrees use. With it, `F == 2(m - cut)` and quotienting preserves every
//! objective exactly.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::Partition;

/// Weight of edges whose endpoints carry different labels.
pub fn cut_weight(g: &Graph, labels: &[usize]) -> f64 {
    let mut cut = 0.0;
    for i in 0..g.node_count() {
        for (j, w) in g.neighbors(i) {
            if i < j && labels[i] != labels[j] {
                cut += w;
            }
        }
    }
    cut
}

/// `F = Σ_ij W_ij δ(g_i, g_j)`.
pub fn objective_f(g: &Graph, labels: &[usize]) -> f64 {
    let mut f = 0.0;
    for i in 0..g.node_count() {
        f += 2.0 * g.loop_weight(i);
        for (j, w) in g.neighbors(i) {
            if labels[i] == labels[j] {
                f += w;
            }
        }
    }
    f
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Penalty {
    /// `Σ_g n_g²`
    GroupSizes,
    /// `Σ_g k_g²`
    GroupDegrees,
}

pub fn penalty(g: &Graph, labels: &[usize], which: Penalty) -> f64 {
    match which {
        Penalty::GroupSizes => {
            let mut sizes: HashMap<usize, f64> = HashMap::new();
            for &l in labels {
                *sizes.entry(l).or_default() += 1.0;
            }
            sizes.values().map(|s| s * s).sum()
        }
        Penalty::GroupDegrees => group_degree_sq(g, labels),
    }
}

fn group_degree_sq(g: &Graph, labels: &[usize]) -> f64 {
    let mut k: HashMap<usize, f64> = HashMap::new();
    for (i, &l) in labels.iter().enumerate() {
        *k.entry(l).or_default() += g.degree(i);
    }
    k.values().map(|s| s * s).sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Hamiltonian {
    /// `-F`
    Plain,
    /// `-Σ (W_ij - λ1) δ`
    Cpm(f64),
    /// `-Σ (W_ij - λ2 k_i k_j) δ`
    Degree(f64),
    /// `-Σ (W_ij (λ3 + 1) - λ3) δ`
    Apm(f64),
}

pub fn hamiltonian(g: &Graph, labels: &[usize], variant: Hamiltonian) -> f64 {
    let f = objective_f(g, labels);
    match variant {
        Hamiltonian::Plain => -f,
        Hamiltonian::Cpm(l1) => -f + l1 * penalty(g, labels, Penalty::GroupSizes),
        Hamiltonian::Degree(l2) => -f + l2 * group_degree_sq(g, labels),
        Hamiltonian::Apm(l3) => -(l3 + 1.0) * f + l3 * penalty(g, labels, Penalty::GroupSizes),
    }
}

/// Modularity `Q`; fails on graphs without edges.
pub fn modularity_q(g: &Graph, labels: &[usize]) -> Result<f64> {
    let two_m = 2.0 * g.total_weight();
    if two_m == 0.0 {
        return Err(Error::param("modularity is undefined for m = 0"));
    }
    Ok((objective_f(g, labels) - group_degree_sq(g, labels) / two_m) / two_m)
}

/// Normalized mutual information with arithmetic-mean normalization.
/// Two single-group partitions score 1.
pub fn nmi(a: &Partition, b: &Partition) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::NodeSetMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    let n = a.len() as f64;
    if a.is_empty() {
        return Ok(1.0);
    }
    let (ia, ib) = (a.group_index(), b.group_index());
    let mut joint: HashMap<(usize, usize), f64> = HashMap::new();
    let mut ca = vec![0.0; a.num_groups()];
    let mut cb = vec![0.0; b.num_groups()];
    for (&x, &y) in ia.iter().zip(&ib) {
        *joint.entry((x, y)).or_default() += 1.0;
        ca[x] += 1.0;
        cb[y] += 1.0;
    }
    let entropy = |c: &[f64]| -> f64 {
        c.iter()
            .filter(|&&v| v > 0.0)
            .map(|&v| {
                let p = v / n;
                -p * p.ln()
            })
            .sum()
    };
    let (ha, hb) = (entropy(&ca), entropy(&cb));
    if ha + hb == 0.0 {
        return Ok(1.0);
    }
    let mut mi = 0.0;
    for (&(x, y), &v) in &joint {
        mi += (v / n) * ((v * n) / (ca[x] * cb[y])).ln();
    }
    Ok((2.0 * mi / (ha + hb)).clamp(0.0, 1.0))
}

/// Fractions of nodes in tiny groups (three nodes or fewer) and in the largest group.
pub fn degeneracy_stats(p: &Partition) -> (f64, f64) {
    if p.is_empty() {
        return (0.0, 0.0);
    }
    let n = p.len() as f64;
    let sizes = p.sizes();
    let tiny: usize = sizes.iter().filter(|&&s| s <= 3).sum();
    let largest = *sizes.iter().max().unwrap();
    (tiny as f64 / n, largest as f64 / n)
}

/// Every objective of one labeling.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ObjectiveReport {
    pub f: f64,
    pub h: f64,
    pub cut: f64,
    pub q: Option<f64>,
    pub h1: Option<(f64, f64)>,
    pub h2: Option<(f64, f64)>,
    pub h3: Option<(f64, f64)>,
}

impl ObjectiveReport {
    /// Computes `F`, `H`, the cut and `Q`, plus each Hamiltonian variant whose
    /// parameter is given.
    pub fn new(
        g: &Graph,
        labels: &[usize],
        lambda1: Option<f64>,
        lambda2: Option<f64>,
        lambda3: Option<f64>,
    ) -> Self {
        let f = objective_f(g, labels);
        ObjectiveReport {
            f,
            h: -f,
            cut: cut_weight(g, labels),
            q: modularity_q(g, labels).ok(),
            h1: lambda1.map(|l| (l, hamiltonian(g, labels, Hamiltonian::Cpm(l)))),
            h2: lambda2.map(|l| (l, hamiltonian(g, labels, Hamiltonian::Degree(l)))),
            h3: lambda3.map(|l| (l, hamiltonian(g, labels, Hamiltonian::Apm(l)))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_triangles() -> Graph {
        Graph::from_pairs(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap()
    }

    /// Explicit ordered-pair double sum over a dense weight matrix.
    fn dense_sum(g: &Graph, labels: &[usize], term: impl Fn(usize, usize, f64) -> f64) -> f64 {
        let n = g.node_count();
        let mut total = 0.0;
        for i in 0..n {
            for j in 0..n {
                if labels[i] == labels[j] {
                    let w = if i == j {
                        2.0 * g.loop_weight(i)
                    } else {
                        g.weight(i, j)
                    };
                    total += term(i, j, w);
                }
            }
        }
        total
    }

    #[test]
    fn f_extremes() {
        let g = two_triangles();
        assert_eq!(objective_f(&g, &[0; 6]), 2.0 * g.total_weight());
        assert_eq!(objective_f(&g, &[0, 1, 2, 3, 4, 5]), 0.0);
        assert_eq!(objective_f(&g, &[0, 0, 0, 1, 1, 1]), 12.0);
    }

    #[test]
    fn f_with_loops_counts_them_twice() {
        let g = Graph::from_edges(&[(0, 0, 2.0), (0, 1, 1.0)]).unwrap();
        assert_eq!(objective_f(&g, &[0, 1]), 4.0);
        assert_eq!(objective_f(&g, &[0, 0]), 2.0 * g.total_weight());
    }

    #[test]
    fn penalties() {
        let p3 = Graph::from_pairs(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(penalty(&p3, &[0, 1, 2], Penalty::GroupSizes), 3.0);
        assert_eq!(penalty(&p3, &[0, 0, 0], Penalty::GroupSizes), 9.0);
        assert_eq!(penalty(&p3, &[0, 0, 0], Penalty::GroupDegrees), 16.0);
    }

    #[test]
    fn hamiltonians_match_dense_sums() {
        let g = Graph::from_edges(&[
            (0, 1, 2.0),
            (1, 2, 1.0),
            (2, 3, 1.0),
            (3, 0, 0.5),
            (2, 2, 1.0),
        ])
        .unwrap();
        let labels = [0, 0, 2, 2];
        let k = g.degrees().to_vec();
        let cases = [
            (Hamiltonian::Plain, dense_sum(&g, &labels, |_, _, w| -w)),
            (
                Hamiltonian::Cpm(0.3),
                dense_sum(&g, &labels, |_, _, w| -(w - 0.3)),
            ),
            (
                Hamiltonian::Degree(0.05),
                dense_sum(&g, &labels, |i, j, w| -(w - 0.05 * k[i] * k[j])),
            ),
            (
                Hamiltonian::Apm(2.0),
                dense_sum(&g, &labels, |_, _, w| -(w * 3.0 - 2.0)),
            ),
        ];
        for (variant, expected) in cases {
            let got = hamiltonian(&g, &labels, variant);
            assert!(
                (got - expected).abs() < 1e-12,
                "{variant:?}: {got} vs {expected}"
            );
        }
    }

    #[test]
    fn modularity_examples() {
        let g = two_triangles();
        assert_eq!(modularity_q(&g, &[0; 6]).unwrap(), 0.0);
        assert!((modularity_q(&g, &[0, 0, 0, 1, 1, 1]).unwrap() - 0.5).abs() < 1e-12);

        let m = g.total_weight();
        let closed = -g.degrees().iter().map(|k| k * k).sum::<f64>() / (4.0 * m * m);
        let single = modularity_q(&g, &[0, 1, 2, 3, 4, 5]).unwrap();
        assert!((single - closed).abs() < 1e-12);

        let two_m = 2.0 * m;
        let k = g.degrees().to_vec();
        let brute = dense_sum(&g, &[0, 0, 0, 1, 1, 1], |i, j, w| w - k[i] * k[j] / two_m) / two_m;
        assert!((brute - 0.5).abs() < 1e-12);

        assert!(modularity_q(&Graph::empty(3), &[0, 1, 2]).is_err());
    }

    #[test]
    fn nmi_examples() {
        let x = Partition::from_labels(&[0, 0, 1, 1, 2, 2, 2]);
        assert!((nmi(&x, &x).unwrap() - 1.0).abs() < 1e-12);
        let relabeled = Partition::from_labels(&[5, 5, 9, 9, 1, 1, 1]);
        assert!((nmi(&relabeled, &x).unwrap() - 1.0).abs() < 1e-12);
        let ones = Partition::single_group(16);
        let singles = Partition::singletons(16);
        assert_eq!(nmi(&singles, &ones).unwrap(), 0.0);
        assert_eq!(nmi(&ones, &ones).unwrap(), 1.0);
        assert!(nmi(&ones, &Partition::single_group(3)).is_err());
    }

    #[test]
    fn nmi_matches_hand_computation() {
        // a = {0,1},{2,3}; b = {0},{1,2,3}
        let a = Partition::from_labels(&[0, 0, 1, 1]);
        let b = Partition::from_labels(&[0, 1, 1, 1]);
        let ha = 2f64.ln();
        let hb = -(0.25 * 0.25f64.ln() + 0.75 * 0.75f64.ln());
        let mi = 0.25 * (0.25_f64 / (0.5 * 0.25)).ln()
            + 0.25 * (0.25_f64 / (0.5 * 0.75)).ln()
            + 0.5 * (0.5_f64 / (0.5 * 0.75)).ln();
        let expected = 2.0 * mi / (ha + hb);
        assert!((nmi(&a, &b).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn degeneracy_examples() {
        let mut labels = vec![0; 5];
        labels.extend([5; 3]);
        labels.extend([8; 2]);
        let p = Partition::from_labels(&labels);
        assert_eq!(degeneracy_stats(&p), (0.5, 0.5));
        assert_eq!(degeneracy_stats(&Partition::single_group(10)), (0.0, 1.0));
        assert_eq!(degeneracy_stats(&Partition::singletons(8)), (1.0, 0.125));
    }
}
