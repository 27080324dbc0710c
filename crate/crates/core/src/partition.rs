use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::graph::Graph;

/// A node labeling in canonical form: every node carries the id of the
/// smallest node in its group. Two partitions compare equal iff they group
/// the nodes identically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Partition {
    labels: Vec<usize>,
    num_groups: usize,
}

impl Partition {
    /// Canonicalizes an arbitrary labeling.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut first: HashMap<usize, usize> = HashMap::new();
        let canon = labels
            .iter()
            .enumerate()
            .map(|(i, &l)| *first.entry(l).or_insert(i))
            .collect();
        Self::from_canonical(canon)
    }

    pub(crate) fn from_canonical(labels: Vec<usize>) -> Self {
        let num_groups = labels.iter().enumerate().filter(|&(i, &l)| i == l).count();
        Partition { labels, num_groups }
    }

    pub fn singletons(n: usize) -> Self {
        Self::from_canonical((0..n).collect())
    }

    pub fn single_group(n: usize) -> Self {
        Self::from_canonical(vec![0; n])
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn num_groups(&self) -> usize {
        self.num_groups
    }

    /// Dense group index per node, numbering groups by smallest member.
    pub fn group_index(&self) -> Vec<usize> {
        let mut dense = vec![usize::MAX; self.labels.len()];
        let mut next = 0;
        let mut out = Vec::with_capacity(self.labels.len());
        for &l in &self.labels {
            if dense[l] == usize::MAX {
                dense[l] = next;
                next += 1;
            }
            out.push(dense[l]);
        }
        out
    }

    /// Member lists ordered by smallest member; members ascend.
    pub fn groups(&self) -> Vec<Vec<usize>> {
        let index = self.group_index();
        let mut groups = vec![Vec::new(); self.num_groups];
        for (i, &g) in index.iter().enumerate() {
            groups[g].push(i);
        }
        groups
    }

    /// Group sizes `n_g` in group-index order.
    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.num_groups];
        for g in self.group_index() {
            sizes[g] += 1;
        }
        sizes
    }

    /// Group degree totals `k_g` in group-index order.
    pub fn group_degrees(&self, g: &Graph) -> Vec<f64> {
        let mut k = vec![0.0; self.num_groups];
        for (i, grp) in self.group_index().into_iter().enumerate() {
            k[grp] += g.degree(i);
        }
        k
    }

    /// Coarsest common refinement of two partitions.
    pub fn meet(&self, other: &Partition) -> Partition {
        assert_eq!(self.len(), other.len());
        let mut first: HashMap<(usize, usize), usize> = HashMap::new();
        let canon = (0..self.len())
            .map(|i| *first.entry((self.labels[i], other.labels[i])).or_insert(i))
            .collect();
        Self::from_canonical(canon)
    }

    /// True iff every group of `finer` lies inside one group of `self`.
    pub fn coarsens(&self, finer: &Partition) -> bool {
        finer.meet(self) == *finer
    }

    /// Lifts a partition of the groups (in group-index order) back onto nodes.
    pub fn lift(&self, over_groups: &Partition) -> Partition {
        assert_eq!(over_groups.len(), self.num_groups);
        let index = self.group_index();
        Partition::from_labels(
            &index
                .into_iter()
                .map(|g| over_groups.labels[g])
                .collect::<Vec<_>>(),
        )
    }
}

/// Node coloring with no monochromatic edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    colors: Vec<usize>,
    count: usize,
}

impl Coloring {
    pub(crate) fn new(colors: Vec<usize>, count: usize) -> Self {
        Coloring { colors, count }
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    pub fn count(&self) -> usize {
        self.count
    }

    /// Nodes of each color class, in node order.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut classes = vec![Vec::new(); self.count];
        for (i, &c) in self.colors.iter().enumerate() {
            classes[c].push(i);
        }
        classes
    }

    pub fn is_valid(&self, g: &Graph) -> bool {
        (0..g.node_count()).all(|i| g.row(i).0.iter().all(|&j| self.colors[i] != self.colors[j]))
    }
}

/// Overlapping assignment: each node holds normalized affiliations to
/// one or more labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cover {
    affiliations: Vec<Vec<(usize, f64)>>,
}

impl Cover {
    /// Builds a cover from per-node `(label, weight)` lists, dropping
    /// non-positive weights and normalizing each node to sum 1.
    pub fn new(affiliations: Vec<Vec<(usize, f64)>>) -> Self {
        let affiliations = affiliations
            .into_iter()
            .map(|mut entries| {
                entries.retain(|e| e.1 > 0.0);
                entries.sort_unstable_by_key(|e| e.0);
                let total: f64 = entries.iter().map(|e| e.1).sum();
                entries.iter_mut().for_each(|e| e.1 /= total);
                entries
            })
            .collect();
        Cover { affiliations }
    }

    /// One label per node with weight 1.
    pub fn from_partition(p: &Partition) -> Self {
        Cover {
            affiliations: p.labels().iter().map(|&l| vec![(l, 1.0)]).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.affiliations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.affiliations.is_empty()
    }

    /// Sorted `(label, weight)` affiliations of node `i`.
    pub fn node(&self, i: usize) -> &[(usize, f64)] {
        &self.affiliations[i]
    }

    pub fn affiliations(&self) -> &[Vec<(usize, f64)>] {
        &self.affiliations
    }

    /// Member lists per label, labels ascending.
    pub fn groups(&self) -> Vec<(usize, Vec<usize>)> {
        let mut by_label: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for (i, entries) in self.affiliations.iter().enumerate() {
            for &(l, _) in entries {
                by_label.entry(l).or_default().push(i);
            }
        }
        by_label.into_iter().collect()
    }

    /// True when every node belongs to exactly one label.
    pub fn is_disjoint(&self) -> bool {
        self.affiliations.iter().all(|a| a.len() == 1)
    }

    /// The disjoint partition, when the cover is one.
    pub fn to_partition(&self) -> Option<Partition> {
        self.is_disjoint().then(|| {
            Partition::from_labels(&self.affiliations.iter().map(|a| a[0].0).collect::<Vec<_>>())
        })
    }
}
