//! Sparse weighted graphs and the structural operations the propagation
//! methods are built from.
//!
//! Every graph keeps a symmetric adjacency view (loops excluded) that the
//! undirected rules read. Directed graphs additionally keep out- and in-arc
//! views; their symmetric weight between `i` and `j` is `A_ij + A_ji`.
//!
//! A loop of weight `w` adds `2w` to its node's degree, so `Σ k_i == 2m`
//! holds for every graph including quotients.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::partition::{Coloring, Partition};

/// Compressed sparse rows: neighbors of `i` are `targets[offsets[i]..offsets[i + 1]]`.
#[derive(Debug, Clone, PartialEq)]
struct Csr {
    offsets: Vec<usize>,
    targets: Vec<usize>,
    weights: Vec<f64>,
}

impl Csr {
    /// Builds rows from `(src, dst, weight)` entries, merging duplicates.
    /// Entries whose merged weight is exactly zero are dropped.
    fn from_entries(n: usize, mut entries: Vec<(usize, usize, f64)>) -> Self {
        entries.sort_unstable_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mut offsets = vec![0usize; n + 1];
        let mut targets = Vec::with_capacity(entries.len());
        let mut weights: Vec<f64> = Vec::with_capacity(entries.len());
        let mut last: Option<(usize, usize)> = None;
        let mut srcs = Vec::with_capacity(entries.len());
        for (s, t, w) in entries {
            if last == Some((s, t)) {
                *weights.last_mut().unwrap() += w;
            } else {
                srcs.push(s);
                targets.push(t);
                weights.push(w);
                last = Some((s, t));
            }
        }
        let mut kept_t = Vec::with_capacity(targets.len());
        let mut kept_w = Vec::with_capacity(weights.len());
        for ((s, t), w) in srcs.into_iter().zip(targets).zip(weights) {
            if w != 0.0 {
                offsets[s + 1] += 1;
                kept_t.push(t);
                kept_w.push(w);
            }
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        Csr {
            offsets,
            targets: kept_t,
            weights: kept_w,
        }
    }

    #[inline]
    fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let (a, b) = (self.offsets[i], self.offsets[i + 1]);
        (&self.targets[a..b], &self.weights[a..b])
    }
}

#[derive(Debug, Clone, PartialEq)]
struct Arcs {
    out: Csr,
    inn: Csr,
}

/// Immutable weighted multigraph over the dense node range `0..n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    n: usize,
    adj: Csr,
    loops: Vec<f64>,
    degrees: Vec<f64>,
    total_weight: f64,
    arcs: Option<Arcs>,
    signed: bool,
    node_types: Option<Vec<usize>>,
    unit_weight: f64,
}

/// Collects construction options for [`Graph`].
#[derive(Debug, Clone, Default)]
pub struct GraphBuilder {
    n: Option<usize>,
    directed: bool,
    signed: bool,
    node_types: Option<Vec<usize>>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn nodes(mut self, n: usize) -> Self {
        self.n = Some(n);
        self
    }

    pub fn directed(mut self, directed: bool) -> Self {
        self.directed = directed;
        self
    }

    /// Allows negative edge weights.
    pub fn signed(mut self, signed: bool) -> Self {
        self.signed = signed;
        self
    }

    pub fn node_types(mut self, types: Vec<usize>) -> Self {
        self.node_types = Some(types);
        self
    }

    pub fn build(self, edges: &[(usize, usize, f64)]) -> Result<Graph> {
        let n = match self.n {
            Some(n) => n,
            None => {
                if edges.is_empty() {
                    return Err(Error::EmptyEdgeList);
                }
                edges.iter().map(|&(u, v, _)| u.max(v)).max().unwrap() + 1
            }
        };
        for &(u, v, w) in edges {
            if !w.is_finite() {
                return Err(Error::NonFiniteWeight { u, v, weight: w });
            }
            if w < 0.0 && !self.signed {
                return Err(Error::NegativeWeight { u, v, weight: w });
            }
            for node in [u, v] {
                if node >= n {
                    return Err(Error::NodeOutOfRange { node, n });
                }
            }
        }
        if let Some(types) = &self.node_types {
            if types.len() != n {
                return Err(Error::NodeSetMismatch {
                    expected: n,
                    got: types.len(),
                });
            }
        }

        let mut loops = vec![0.0; n];
        let mut sym = Vec::with_capacity(edges.len() * 2);
        for &(u, v, w) in edges {
            if u == v {
                loops[u] += w;
            } else {
                sym.push((u, v, w));
                sym.push((v, u, w));
            }
        }
        let arcs = if self.directed {
            let out: Vec<_> = edges.iter().filter(|e| e.0 != e.1).copied().collect();
            let inn: Vec<_> = out.iter().map(|&(u, v, w)| (v, u, w)).collect();
            Some(Arcs {
                out: Csr::from_entries(n, out),
                inn: Csr::from_entries(n, inn),
            })
        } else {
            None
        };
        let adj = Csr::from_entries(n, sym);
        Ok(Graph::assemble(
            n,
            adj,
            loops,
            arcs,
            self.signed,
            self.node_types,
        ))
    }
}

impl Graph {
    fn assemble(
        n: usize,
        adj: Csr,
        loops: Vec<f64>,
        arcs: Option<Arcs>,
        signed: bool,
        node_types: Option<Vec<usize>>,
    ) -> Graph {
        let mut degrees = vec![0.0; n];
        let mut unit = f64::INFINITY;
        for (i, deg) in degrees.iter_mut().enumerate() {
            let (_, ws) = adj.row(i);
            *deg = ws.iter().sum::<f64>() + 2.0 * loops[i];
            for &w in ws.iter().chain(std::iter::once(&loops[i])) {
                if w != 0.0 {
                    unit = unit.min(w.abs());
                }
            }
        }
        let total_weight = adj.weights.iter().sum::<f64>() / 2.0 + loops.iter().sum::<f64>();
        Graph {
            n,
            adj,
            loops,
            degrees,
            total_weight,
            arcs,
            signed,
            node_types,
            unit_weight: if unit.is_finite() { unit } else { 1.0 },
        }
    }

    /// Undirected graph from `(u, v, weight)` triples; the node count is
    /// inferred from the largest id.
    pub fn from_edges(edges: &[(usize, usize, f64)]) -> Result<Graph> {
        GraphBuilder::new().build(edges)
    }

    /// Undirected unit-weight graph on `n` nodes.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Graph> {
        let edges: Vec<_> = pairs.iter().map(|&(u, v)| (u, v, 1.0)).collect();
        GraphBuilder::new().nodes(n).build(&edges)
    }

    pub fn empty(n: usize) -> Graph {
        GraphBuilder::new().nodes(n).build(&[]).unwrap()
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    /// Total edge weight `m` (loops counted once).
    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    pub fn is_directed(&self) -> bool {
        self.arcs.is_some()
    }

    pub fn is_signed(&self) -> bool {
        self.signed
    }

    pub fn node_types(&self) -> Option<&[usize]> {
        self.node_types.as_deref()
    }

    /// Weighted degree `k_i`.
    #[inline]
    pub fn degree(&self, i: usize) -> f64 {
        self.degrees[i]
    }

    pub fn degrees(&self) -> &[f64] {
        &self.degrees
    }

    #[inline]
    pub fn loop_weight(&self, i: usize) -> f64 {
        self.loops[i]
    }

    /// Number of distinct non-loop neighbors.
    #[inline]
    pub fn neighbor_count(&self, i: usize) -> usize {
        self.adj.offsets[i + 1] - self.adj.offsets[i]
    }

    pub fn max_neighbor_count(&self) -> usize {
        (0..self.n)
            .map(|i| self.neighbor_count(i))
            .max()
            .unwrap_or(0)
    }

    /// Sorted neighbor ids and weights of `i`, loops excluded.
    #[inline]
    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        self.adj.row(i)
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let (t, w) = self.adj.row(i);
        t.iter().copied().zip(w.iter().copied())
    }

    /// Out-arcs of `i`. Panics on undirected graphs.
    pub fn out_row(&self, i: usize) -> (&[usize], &[f64]) {
        self.arcs.as_ref().expect("graph is undirected").out.row(i)
    }

    /// In-arcs of `i`. Panics on undirected graphs.
    pub fn in_row(&self, i: usize) -> (&[usize], &[f64]) {
        self.arcs.as_ref().expect("graph is undirected").inn.row(i)
    }

    /// Symmetric weight between two distinct nodes, or the loop weight when `i == j`.
    pub fn weight(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return self.loops[i];
        }
        let (t, w) = self.adj.row(i);
        match t.binary_search(&j) {
            Ok(pos) => w[pos],
            Err(_) => 0.0,
        }
    }

    /// Smallest nonzero absolute weight; 1 for unweighted graphs.
    pub fn unit_weight(&self) -> f64 {
        self.unit_weight
    }

    /// Edges as `(u, v, w)` with `u <= v` for undirected graphs, or arcs for
    /// directed ones. Loops are included.
    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            if self.loops[i] != 0.0 {
                out.push((i, i, self.loops[i]));
            }
            let (t, w) = match &self.arcs {
                Some(arcs) => arcs.out.row(i),
                None => self.adj.row(i),
            };
            for (&j, &wij) in t.iter().zip(w) {
                if self.arcs.is_some() || i < j {
                    out.push((i, j, wij));
                }
            }
        }
        out
    }

    /// Number of common non-loop neighbors of `i` and `j`, by sorted merge.
    pub fn common_neighbors(&self, i: usize, j: usize) -> usize {
        let (a, _) = self.adj.row(i);
        let (b, _) = self.adj.row(j);
        let (mut x, mut y, mut count) = (0, 0, 0);
        while x < a.len() && y < b.len() {
            match a[x].cmp(&b[y]) {
                std::cmp::Ordering::Less => x += 1,
                std::cmp::Ordering::Greater => y += 1,
                std::cmp::Ordering::Equal => {
                    if a[x] != i && a[x] != j {
                        count += 1;
                    }
                    x += 1;
                    y += 1;
                }
            }
        }
        count
    }

    /// Undirected graph with the given adjacency lists, used for transport
    /// graphs in connectivity checks.
    pub(crate) fn from_neighbor_sets(n: usize, sets: Vec<Vec<usize>>) -> Graph {
        let mut entries = Vec::new();
        for (i, set) in sets.into_iter().enumerate() {
            for j in set {
                if i != j {
                    entries.push((i, j, 1.0));
                    entries.push((j, i, 1.0));
                }
            }
        }
        let mut adj = Csr::from_entries(n, entries);
        for w in &mut adj.weights {
            *w = 1.0;
        }
        Graph::assemble(n, adj, vec![0.0; n], None, false, None)
    }
}

/// Groups are maximal connected node sets; each is labeled by its smallest member.
pub fn connected_components(g: &Graph) -> Partition {
    split_into_components(g, &vec![0; g.node_count()])
}

/// Refines `labels` so that two nodes share a group iff they share a label
/// and are connected inside that label's induced subgraph.
pub fn split_into_components(g: &Graph, labels: &[usize]) -> Partition {
    let n = g.node_count();
    assert_eq!(labels.len(), n, "labeling must cover every node");
    let mut out = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for start in 0..n {
        if out[start] != usize::MAX {
            continue;
        }
        out[start] = start;
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            for &v in g.row(u).0 {
                if out[v] == usize::MAX && labels[v] == labels[u] {
                    out[v] = start;
                    queue.push_back(v);
                }
            }
        }
    }
    Partition::from_canonical(out)
}

/// Meta-network with one node per group (ordered by smallest member).
/// Edges between groups sum the original weights; each group's loop holds
/// its internal edge weight plus its members' loops, so `m` is preserved.
pub fn quotient_graph(g: &Graph, p: &Partition) -> Graph {
    assert_eq!(p.len(), g.node_count(), "partition must cover every node");
    let index = p.group_index();
    let q = p.num_groups();
    let mut loops = vec![0.0; q];
    let mut entries = Vec::new();
    for i in 0..g.node_count() {
        let a = index[i];
        loops[a] += g.loop_weight(i);
        for (j, w) in g.neighbors(i) {
            if j < i {
                continue;
            }
            let b = index[j];
            if a == b {
                loops[a] += w;
            } else {
                entries.push((a, b, w));
                entries.push((b, a, w));
            }
        }
    }
    let adj = Csr::from_entries(q, entries);
    Graph::assemble(q, adj, loops, None, g.is_signed(), None)
}

/// Greedy smallest-available-color assignment in node order; uses at most
/// `Δ + 1` colors.
pub fn greedy_coloring(g: &Graph) -> Coloring {
    let n = g.node_count();
    let mut colors = vec![usize::MAX; n];
    let mut taken: Vec<usize> = Vec::new();
    let mut count = 0;
    for i in 0..n {
        let (nbrs, _) = g.row(i);
        taken.clear();
        taken.extend(nbrs.iter().map(|&j| colors[j]).filter(|&c| c != usize::MAX));
        taken.sort_unstable();
        taken.dedup();
        let mut c = 0;
        for &t in &taken {
            if t == c {
                c += 1;
            } else if t > c {
                break;
            }
        }
        colors[i] = c;
        count = count.max(c + 1);
    }
    Coloring::new(colors, count)
}

/// Weighting applied to the edges of a signed graph.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SignedScheme {
    /// Positive edges get `positive`, negative edges get `negative`.
    Fixed { positive: f64, negative: f64 },
    /// Positive edges get `1/m_p` and negative edges `-1/m_n`, where `m_p`
    /// and `m_n` count the edges of each sign.
    EqualTotal,
}

/// Replaces each edge weight by a value determined only by its sign.
pub fn signed_reweight(g: &Graph, scheme: SignedScheme) -> Result<Graph> {
    let edges = g.edges();
    let positives = edges.iter().filter(|e| e.2 > 0.0).count();
    let negatives = edges.iter().filter(|e| e.2 < 0.0).count();
    let (wp, wn) = match scheme {
        SignedScheme::Fixed { positive, negative } => {
            if !(positive > 0.0) || !(negative < 0.0) {
                return Err(Error::param(
                    "fixed signed weights need positive > 0 and negative < 0",
                ));
            }
            (positive, negative)
        }
        SignedScheme::EqualTotal => {
            if positives == 0 || negatives == 0 {
                return Err(Error::param(
                    "equal-total weighting needs both positive and negative edges",
                ));
            }
            (1.0 / positives as f64, -1.0 / negatives as f64)
        }
    };
    let reweighted: Vec<_> = edges
        .into_iter()
        .map(|(u, v, w)| (u, v, if w > 0.0 { wp } else { wn }))
        .collect();
    let mut b = GraphBuilder::new()
        .nodes(g.node_count())
        .directed(g.is_directed())
        .signed(true);
    if let Some(t) = g.node_types() {
        b = b.node_types(t.to_vec());
    }
    b.build(&reweighted)
}

/// Maps between original node ids and the re-indexed subgraph.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeMap {
    /// `to_original[local] = original`
    pub to_original: Vec<usize>,
    /// `to_local[original] = Some(local)` for kept nodes.
    pub to_local: Vec<Option<usize>>,
}

/// Subgraph induced by `nodes`, re-indexed in increasing original id order.
pub fn induced_subgraph(g: &Graph, nodes: &[usize]) -> Result<(Graph, NodeMap)> {
    let n = g.node_count();
    let mut to_local = vec![None; n];
    let mut to_original: Vec<usize> = Vec::with_capacity(nodes.len());
    for &v in nodes {
        if v >= n {
            return Err(Error::NodeOutOfRange { node: v, n });
        }
    }
    let mut sorted = nodes.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    for (local, &v) in sorted.iter().enumerate() {
        to_local[v] = Some(local);
        to_original.push(v);
    }
    let mut edges = Vec::new();
    for (local, &v) in to_original.iter().enumerate() {
        if g.loop_weight(v) != 0.0 {
            edges.push((local, local, g.loop_weight(v)));
        }
        match &g.arcs {
            Some(arcs) => {
                let (t, w) = arcs.out.row(v);
                for (&u, &wu) in t.iter().zip(w) {
                    if let Some(lu) = to_local[u] {
                        edges.push((local, lu, wu));
                    }
                }
            }
            None => {
                for (u, wu) in g.neighbors(v) {
                    if let Some(lu) = to_local[u] {
                        if local < lu {
                            edges.push((local, lu, wu));
                        }
                    }
                }
            }
        }
    }
    let mut b = GraphBuilder::new()
        .nodes(to_original.len())
        .directed(g.is_directed())
        .signed(g.is_signed());
    if let Some(t) = g.node_types() {
        b = b.node_types(to_original.iter().map(|&v| t[v]).collect());
    }
    let sub = b.build(&edges)?;
    Ok((
        sub,
        NodeMap {
            to_original,
            to_local,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Graph {
        Graph::from_pairs(3, &[(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    fn path(n: usize) -> Graph {
        let pairs: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_pairs(n, &pairs).unwrap()
    }

    #[test]
    fn path_degrees_and_weight() {
        let g = Graph::from_edges(&[(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.total_weight(), 2.0);
        assert_eq!(g.degrees(), &[1.0, 2.0, 1.0]);
    }

    #[test]
    fn parallel_edges_accumulate() {
        let g = Graph::from_edges(&[(0, 1, 1.0), (0, 1, 1.0)]).unwrap();
        assert_eq!(g.weight(0, 1), 2.0);
        assert_eq!(g.weight(1, 0), 2.0);
        assert_eq!(g.total_weight(), 2.0);
        assert_eq!(g.neighbor_count(0), 1);
    }

    #[test]
    fn loop_counts_twice_in_degree() {
        let g = Graph::from_edges(&[(0, 0, 1.0)]).unwrap();
        assert_eq!(g.node_count(), 1);
        assert_eq!(g.loop_weight(0), 1.0);
        assert_eq!(g.degree(0), 2.0);
        assert_eq!(g.total_weight(), 1.0);
    }

    #[test]
    fn build_errors() {
        assert!(matches!(
            Graph::from_edges(&[(0, 1, f64::NAN)]),
            Err(Error::NonFiniteWeight { .. })
        ));
        assert!(matches!(
            GraphBuilder::new().nodes(2).build(&[(0, 2, 1.0)]),
            Err(Error::NodeOutOfRange { node: 2, n: 2 })
        ));
        assert!(matches!(Graph::from_edges(&[]), Err(Error::EmptyEdgeList)));
        assert!(matches!(
            Graph::from_edges(&[(0, 1, -1.0)]),
            Err(Error::NegativeWeight { .. })
        ));
        assert!(GraphBuilder::new()
            .signed(true)
            .build(&[(0, 1, -1.0)])
            .is_ok());
    }

    #[test]
    fn components() {
        let p = connected_components(&path(3));
        assert_eq!(p.num_groups(), 1);
        let two = Graph::from_pairs(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(connected_components(&two).labels(), &[0, 0, 2, 2]);
        let empty = Graph::empty(3);
        assert_eq!(connected_components(&empty).labels(), &[0, 1, 2]);
    }

    #[test]
    fn split_examples() {
        assert_eq!(split_into_components(&path(3), &[7, 9, 7]).num_groups(), 3);
        assert_eq!(
            split_into_components(&triangle(), &[4, 4, 4]).num_groups(),
            1
        );
        let p = split_into_components(&path(4), &[1, 1, 2, 2]);
        assert_eq!(p.groups(), vec![vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn quotient_examples() {
        let p = Partition::from_labels(&[0, 0, 1, 1]);
        let q = quotient_graph(&path(4), &p);
        assert_eq!(q.node_count(), 2);
        assert_eq!(q.loop_weight(0), 1.0);
        assert_eq!(q.loop_weight(1), 1.0);
        assert_eq!(q.weight(0, 1), 1.0);
        assert_eq!(q.total_weight(), 3.0);

        let q = quotient_graph(&triangle(), &Partition::from_labels(&[0, 0, 1]));
        assert_eq!(q.weight(0, 1), 2.0);
        assert_eq!(q.loop_weight(0), 1.0);
        assert_eq!(q.loop_weight(1), 0.0);

        let g = path(5);
        let same = quotient_graph(&g, &Partition::singletons(5));
        assert_eq!(same.edges(), g.edges());
    }

    #[test]
    fn coloring_examples() {
        assert_eq!(greedy_coloring(&triangle()).count(), 3);
        let star = Graph::from_pairs(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        assert_eq!(greedy_coloring(&star).count(), 2);
        let c4 = Graph::from_pairs(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let c = greedy_coloring(&c4);
        assert_eq!(c.count(), 2);
        assert!(c.is_valid(&c4));
    }

    #[test]
    fn signed_equal_total() {
        let g = GraphBuilder::new()
            .signed(true)
            .build(&[(0, 1, 1.0), (1, 2, 1.0), (0, 2, -1.0)])
            .unwrap();
        let r = signed_reweight(&g, SignedScheme::EqualTotal).unwrap();
        assert_eq!(r.weight(0, 1), 0.5);
        assert_eq!(r.weight(1, 2), 0.5);
        assert_eq!(r.weight(0, 2), -1.0);

        let fixed = SignedScheme::Fixed {
            positive: 1.0,
            negative: -1.0,
        };
        assert_eq!(signed_reweight(&g, fixed).unwrap().edges(), g.edges());

        let unsigned = path(4);
        assert!(signed_reweight(&unsigned, SignedScheme::EqualTotal).is_err());
        assert_eq!(
            signed_reweight(&unsigned, fixed).unwrap().edges(),
            unsigned.edges()
        );
    }

    #[test]
    fn induced_examples() {
        let (sub, map) = induced_subgraph(&triangle(), &[0, 1]).unwrap();
        assert_eq!(sub.edges(), vec![(0, 1, 1.0)]);
        assert_eq!(map.to_original, vec![0, 1]);
        assert_eq!(map.to_local[2], None);

        let g = path(4);
        let (all, _) = induced_subgraph(&g, &[3, 2, 1, 0]).unwrap();
        assert_eq!(all.edges(), g.edges());

        let (iso, _) = induced_subgraph(&path(3), &[0, 2]).unwrap();
        assert_eq!(iso.total_weight(), 0.0);
        assert_eq!(iso.node_count(), 2);

        assert!(induced_subgraph(&g, &[9]).is_err());
    }

    #[test]
    fn directed_views() {
        let g = GraphBuilder::new()
            .directed(true)
            .build(&[(0, 1, 1.0), (1, 0, 2.0), (2, 1, 1.0)])
            .unwrap();
        assert_eq!(g.weight(0, 1), 3.0);
        assert_eq!(g.out_row(2).0, &[1]);
        assert_eq!(g.in_row(1).0, &[0, 2]);
        assert_eq!(g.degrees().iter().sum::<f64>(), 2.0 * g.total_weight());
    }

    #[test]
    fn common_neighbor_counts() {
        let k4 = Graph::from_pairs(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(k4.common_neighbors(0, 1), 2);
        assert_eq!(path(3).common_neighbors(0, 2), 1);
        assert_eq!(path(3).common_neighbors(0, 1), 0);
    }
}
