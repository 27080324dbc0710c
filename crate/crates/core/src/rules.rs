//! Label scoring rules.
//!
//! Every rule scores the candidate labels of one node; the engine takes the
//! maximal set and applies a tie policy. Scores only ever involve labels
//! present around the node plus the node's own current label, which always
//! competes (with score 0 when no neighbor carries it).
//!
//! [`RuleState`] keeps the per-label aggregates the constrained and
//! preference rules need (`n_g`, `k_g`, `k_i^{g_i}`, node preferences) and
//! updates them incrementally as nodes move.

use crate::error::{Error, Result};
use crate::graph::{induced_subgraph, Graph};
use crate::partition::Partition;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PreferenceMode {
    /// Neighbor `j` votes with strength `p_j`.
    Promote,
    /// Neighbor `j` votes with strength `1 - p_j`.
    Suppress,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CitationMode {
    /// Nodes citing the same targets (shared out-neighbors).
    Cocitation,
    /// Nodes cited by the same sources (shared in-neighbors).
    BibliographicCoupling,
}

/// Label scoring rule.
#[derive(Debug, Clone, PartialEq)]
pub enum Rule {
    /// Sum of edge weights to each neighboring label.
    Standard,
    /// Constant Potts model: `k_i^g - λ1 n_g`.
    Cpm { lambda: f64 },
    /// Degree-penalized rule: `k_i^g - λ2 k_i k_g`; `λ2 = 1/2m` targets modularity.
    Modularity { lambda: f64 },
    /// Fixed per-node preferences.
    Preference {
        prefs: Vec<f64>,
        mode: PreferenceMode,
    },
    /// Random-walk preferences promoting group cores, updated as nodes move.
    Defensive,
    /// Random-walk preferences promoting group borders.
    Offensive,
    /// Logistic weights of the update position within the sweep, optionally
    /// multiplied by defensive preferences.
    Balanced { gamma: f64, defensive: bool },
    /// Edge weights boosted by common-neighbor counts.
    NeighborhoodStrength,
    /// Mix of direct (`tau`) and two-hop (`1 - tau`) label transport.
    GeneralTau { tau: f64 },
    /// Two-hop transport along directed arcs.
    Citation(CitationMode),
}

/// Maps an absolute-Potts parameter onto the equivalent constant-Potts one.
pub fn apm_lambda(lambda3: f64) -> Result<f64> {
    if !(lambda3 > -1.0) || !lambda3.is_finite() {
        return Err(Error::param(format!(
            "apm lambda must be > -1, got {lambda3}"
        )));
    }
    Ok(lambda3 / (lambda3 + 1.0))
}

/// Logistic node weight for position `t` in `(0, 1]`.
pub fn balanced_weight(t: f64, gamma: f64) -> f64 {
    1.0 / (1.0 + (-gamma * (2.0 * t - 1.0)).exp())
}

impl Rule {
    /// Absolute Potts model, expressed through its constant-Potts equivalent.
    pub fn apm(lambda3: f64) -> Result<Rule> {
        Ok(Rule::Cpm {
            lambda: apm_lambda(lambda3)?,
        })
    }

    /// Degree-penalized rule with `λ2 = 1/2m`.
    pub fn modularity_for(g: &Graph) -> Rule {
        Rule::Modularity {
            lambda: 1.0 / (2.0 * g.total_weight()),
        }
    }

    pub fn validate(&self, g: &Graph) -> Result<()> {
        let n = g.node_count();
        match self {
            Rule::Cpm { lambda } | Rule::Modularity { lambda } => {
                if !(*lambda >= 0.0) || !lambda.is_finite() {
                    return Err(Error::param(format!("lambda must be >= 0, got {lambda}")));
                }
            }
            Rule::Preference { prefs, mode } => {
                if prefs.len() != n {
                    return Err(Error::NodeSetMismatch {
                        expected: n,
                        got: prefs.len(),
                    });
                }
                let ok = prefs.iter().all(|&p| {
                    p.is_finite()
                        && match mode {
                            PreferenceMode::Promote => p >= 0.0,
                            PreferenceMode::Suppress => p <= 1.0,
                        }
                });
                if !ok {
                    return Err(Error::param("preferences out of range for the mode"));
                }
            }
            Rule::Balanced { gamma, .. } => {
                if !gamma.is_finite() {
                    return Err(Error::param("gamma must be finite"));
                }
            }
            Rule::GeneralTau { tau } => {
                if !(0.0..=1.0).contains(tau) {
                    return Err(Error::param(format!("tau must lie in [0, 1], got {tau}")));
                }
            }
            Rule::NeighborhoodStrength => {
                if g.is_directed() {
                    return Err(Error::RuleGraphMismatch(
                        "neighborhood strength needs an undirected graph".into(),
                    ));
                }
            }
            Rule::Citation(_) => {
                if !g.is_directed() {
                    return Err(Error::RuleGraphMismatch(
                        "citation rules need a directed graph".into(),
                    ));
                }
            }
            Rule::Standard | Rule::Defensive | Rule::Offensive => {}
        }
        Ok(())
    }

    /// True for rules that move labels between nodes two steps apart.
    pub fn is_two_hop(&self) -> bool {
        matches!(self, Rule::Citation(_)) || matches!(self, Rule::GeneralTau { tau } if *tau < 1.0)
    }

    fn dynamic_prefs(&self) -> bool {
        matches!(
            self,
            Rule::Defensive
                | Rule::Offensive
                | Rule::Balanced {
                    defensive: true,
                    ..
                }
        )
    }

    /// Graph along which this rule moves labels; groups are split into
    /// connected components of it. `None` means the input graph itself.
    pub fn transport_graph(&self, g: &Graph) -> Option<Graph> {
        let n = g.node_count();
        let mut sets: Vec<Vec<usize>> = vec![Vec::new(); n];
        let link_all = |members: &[usize], sets: &mut Vec<Vec<usize>>| {
            for (a, &x) in members.iter().enumerate() {
                for &y in &members[a + 1..] {
                    sets[x].push(y);
                }
            }
        };
        match self {
            Rule::GeneralTau { tau } if *tau < 1.0 => {
                for k in 0..n {
                    let (nbrs, _) = g.row(k);
                    if nbrs.len() >= 2 {
                        link_all(nbrs, &mut sets);
                    }
                    if *tau > 0.0 {
                        sets[k].extend_from_slice(nbrs);
                    }
                }
            }
            Rule::Citation(mode) => {
                for k in 0..n {
                    let (members, _) = match mode {
                        CitationMode::Cocitation => g.in_row(k),
                        CitationMode::BibliographicCoupling => g.out_row(k),
                    };
                    link_all(members, &mut sets);
                }
            }
            _ => return None,
        }
        Some(Graph::from_neighbor_sets(n, sets))
    }
}

/// Dense score accumulator over labels `0..n`.
#[derive(Debug, Clone)]
pub(crate) struct ScoreBuf {
    vals: Vec<f64>,
    mark: Vec<bool>,
    touched: Vec<usize>,
}

impl ScoreBuf {
    pub(crate) fn new(n: usize) -> Self {
        ScoreBuf {
            vals: vec![0.0; n],
            mark: vec![false; n],
            touched: Vec::new(),
        }
    }

    #[inline]
    pub(crate) fn add(&mut self, label: usize, v: f64) {
        if !self.mark[label] {
            self.mark[label] = true;
            self.touched.push(label);
        }
        self.vals[label] += v;
    }

    pub(crate) fn clear(&mut self) {
        for &l in &self.touched {
            self.vals[l] = 0.0;
            self.mark[l] = false;
        }
        self.touched.clear();
    }

    pub(crate) fn get(&self, label: usize) -> f64 {
        self.vals[label]
    }

    pub(crate) fn labels(&self) -> &[usize] {
        &self.touched
    }

    fn map_in_place(&mut self, mut f: impl FnMut(usize, f64) -> f64) {
        for &l in &self.touched {
            self.vals[l] = f(l, self.vals[l]);
        }
    }

    /// Sorted `(label, score)` pairs.
    pub(crate) fn entries(&self) -> Vec<(usize, f64)> {
        let mut out: Vec<_> = self.touched.iter().map(|&l| (l, self.vals[l])).collect();
        out.sort_unstable_by_key(|e| e.0);
        out
    }
}

/// Labels plus the incrementally maintained aggregates rules read.
#[derive(Debug, Clone)]
pub struct RuleState {
    labels: Vec<usize>,
    sizes: Vec<usize>,
    group_degree: Vec<f64>,
    own_weight: Vec<f64>,
    prefs: Option<Vec<f64>>,
    positions: Vec<f64>,
    group_max_pref: Vec<f64>,
}

impl RuleState {
    /// State for `labels`, which must all be `< n`.
    pub fn new(g: &Graph, rule: &Rule, labels: Vec<usize>) -> Result<Self> {
        let n = g.node_count();
        if labels.len() != n {
            return Err(Error::NodeSetMismatch {
                expected: n,
                got: labels.len(),
            });
        }
        if let Some(&bad) = labels.iter().find(|&&l| l >= n) {
            return Err(Error::param(format!(
                "label {bad} is not below node count {n}"
            )));
        }
        let mut state = RuleState {
            labels,
            sizes: vec![0; n],
            group_degree: vec![0.0; n],
            own_weight: vec![0.0; n],
            prefs: None,
            positions: (1..=n).map(|i| i as f64 / n as f64).collect(),
            group_max_pref: vec![0.0; n],
        };
        state.recount(g);
        state.prefs = match rule {
            Rule::Preference { prefs, .. } => Some(prefs.clone()),
            r if r.dynamic_prefs() => Some(
                (0..n)
                    .map(|i| {
                        let own = state.own_weight[i];
                        if state.sizes[state.labels[i]] > 1 && own > 0.0 {
                            own
                        } else {
                            1.0
                        }
                    })
                    .collect(),
            ),
            _ => None,
        };
        state.refresh_group_max();
        Ok(state)
    }

    fn recount(&mut self, g: &Graph) {
        self.sizes.iter_mut().for_each(|s| *s = 0);
        self.group_degree.iter_mut().for_each(|s| *s = 0.0);
        for i in 0..self.labels.len() {
            let l = self.labels[i];
            self.sizes[l] += 1;
            self.group_degree[l] += g.degree(i);
            self.own_weight[i] = g.loop_weight(i)
                + g.neighbors(i)
                    .filter(|&(j, _)| self.labels[j] == l)
                    .map(|(_, w)| w)
                    .sum::<f64>();
        }
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    #[inline]
    pub fn label(&self, i: usize) -> usize {
        self.labels[i]
    }

    /// `n_g` for label `g`.
    pub fn size(&self, label: usize) -> usize {
        self.sizes[label]
    }

    /// `k_g` for label `g`.
    pub fn group_degree(&self, label: usize) -> f64 {
        self.group_degree[label]
    }

    /// `k_i^{g_i}`, including the node's loop weight.
    pub fn own_group_weight(&self, i: usize) -> f64 {
        self.own_weight[i]
    }

    pub fn preferences(&self) -> Option<&[f64]> {
        self.prefs.as_deref()
    }

    /// Sets the update positions `t_i` used by the balanced rule.
    pub fn set_positions(&mut self, order: &[usize]) {
        let n = order.len() as f64;
        for (pos, &i) in order.iter().enumerate() {
            self.positions[i] = (pos + 1) as f64 / n;
        }
    }

    pub fn position(&self, i: usize) -> f64 {
        self.positions[i]
    }

    /// Refreshes per-group preference maxima used by the offensive rule.
    pub fn refresh_group_max(&mut self) {
        if let Some(prefs) = &self.prefs {
            self.group_max_pref.iter_mut().for_each(|m| *m = 0.0);
            for (i, &p) in prefs.iter().enumerate() {
                let l = self.labels[i];
                if p > self.group_max_pref[l] {
                    self.group_max_pref[l] = p;
                }
            }
        }
    }

    /// Moves node `i` to `label`, updating counts but not preferences.
    pub fn relabel(&mut self, g: &Graph, i: usize, label: usize) {
        let old = self.labels[i];
        if old == label {
            return;
        }
        let mut own = g.loop_weight(i);
        for (j, w) in g.neighbors(i) {
            let lj = self.labels[j];
            if lj == old {
                self.own_weight[j] -= w;
            } else if lj == label {
                self.own_weight[j] += w;
                own += w;
            }
        }
        self.own_weight[i] = own;
        self.sizes[old] -= 1;
        self.sizes[label] += 1;
        let k = g.degree(i);
        self.group_degree[old] -= k;
        self.group_degree[label] += k;
        self.labels[i] = label;
    }

    /// Moves node `i` and, for rules with dynamic preferences, updates its
    /// preference.
    pub fn move_node(&mut self, g: &Graph, i: usize, label: usize) {
        if self.labels[i] != label {
            self.relabel(g, i, label);
            self.update_preference(g, i);
        }
    }

    /// Random-walk preference update for a node that just changed group:
    /// `p_i = Σ_j p_j W_ij δ(g_i, g_j) / k_j^{g_j}`. Terms with
    /// `k_j^{g_j} == 0` contribute nothing; a non-positive result keeps the
    /// old value. No-op for rules without dynamic preferences.
    pub fn update_preference(&mut self, g: &Graph, i: usize) {
        let Some(prefs) = self.prefs.as_mut() else {
            return;
        };
        let li = self.labels[i];
        let mut p = 0.0;
        if self.own_weight[i] > 0.0 {
            p += prefs[i] * g.loop_weight(i) / self.own_weight[i];
        }
        for (j, w) in g.neighbors(i) {
            if self.labels[j] == li && self.own_weight[j] > 0.0 {
                p += prefs[j] * w / self.own_weight[j];
            }
        }
        if p > 0.0 && p.is_finite() {
            prefs[i] = p;
        }
    }

    fn vote(&self, rule: &Rule, j: usize) -> f64 {
        match rule {
            Rule::Preference { prefs, mode } => match mode {
                PreferenceMode::Promote => prefs[j],
                PreferenceMode::Suppress => 1.0 - prefs[j],
            },
            Rule::Defensive => self.prefs.as_ref().unwrap()[j],
            Rule::Offensive => {
                let l = self.labels[j];
                let max = self.group_max_pref[l];
                if self.sizes[l] <= 1 || max <= 0.0 {
                    1.0
                } else {
                    (1.0 - self.prefs.as_ref().unwrap()[j] / max).max(0.0)
                }
            }
            Rule::Balanced { gamma, defensive } => {
                let b = balanced_weight(self.positions[j], *gamma);
                if *defensive {
                    b * self.prefs.as_ref().unwrap()[j]
                } else {
                    b
                }
            }
            _ => 1.0,
        }
    }

    /// Fills `buf` with the scores of node `i` under `rule`.
    pub(crate) fn score_into(&self, g: &Graph, rule: &Rule, i: usize, buf: &mut ScoreBuf) {
        buf.clear();
        let own = self.labels[i];
        buf.add(own, 0.0);
        match rule {
            Rule::NeighborhoodStrength => {
                for (j, w) in g.neighbors(i) {
                    let c = g.common_neighbors(i, j) as f64;
                    buf.add(self.labels[j], (1.0 + c) * w);
                }
                buf.add(own, g.loop_weight(i));
            }
            Rule::GeneralTau { tau } => {
                let tau = *tau;
                if tau > 0.0 {
                    for (j, w) in g.neighbors(i) {
                        buf.add(self.labels[j], tau * w);
                    }
                    buf.add(own, tau * g.loop_weight(i));
                }
                if tau < 1.0 {
                    for (k, wik) in g.neighbors(i) {
                        let deg = g.neighbor_count(k);
                        if deg < 2 {
                            continue;
                        }
                        let f = (1.0 - tau) * wik / (deg - 1) as f64;
                        for (j, wkj) in g.neighbors(k) {
                            if j != i {
                                buf.add(self.labels[j], f * wkj);
                            }
                        }
                    }
                }
            }
            Rule::Citation(mode) => {
                let (first, second): (
                    fn(&Graph, usize) -> (&[usize], &[f64]),
                    fn(&Graph, usize) -> (&[usize], &[f64]),
                ) = match mode {
                    CitationMode::Cocitation => (Graph::out_row, Graph::in_row),
                    CitationMode::BibliographicCoupling => (Graph::in_row, Graph::out_row),
                };
                let (ks, wks) = first(g, i);
                for (&k, &wik) in ks.iter().zip(wks) {
                    let (js, wjs) = second(g, k);
                    for (&j, &wjk) in js.iter().zip(wjs) {
                        if j != i {
                            buf.add(self.labels[j], wik * wjk);
                        }
                    }
                }
            }
            _ => {
                let weighted = !matches!(
                    rule,
                    Rule::Standard | Rule::Cpm { .. } | Rule::Modularity { .. }
                );
                if weighted {
                    for (j, w) in g.neighbors(i) {
                        buf.add(self.labels[j], self.vote(rule, j) * w);
                    }
                    buf.add(own, self.vote(rule, i) * g.loop_weight(i));
                } else {
                    for (j, w) in g.neighbors(i) {
                        buf.add(self.labels[j], w);
                    }
                    buf.add(own, g.loop_weight(i));
                }
            }
        }
        match rule {
            Rule::Cpm { lambda } => {
                let lambda = *lambda;
                buf.map_in_place(|l, s| {
                    let size = self.sizes[l] - usize::from(l == own);
                    s - lambda * size as f64
                });
            }
            Rule::Modularity { lambda } => {
                let lambda = *lambda;
                let ki = g.degree(i);
                buf.map_in_place(|l, s| {
                    let kg = self.group_degree[l] - if l == own { ki } else { 0.0 };
                    s - lambda * ki * kg
                });
            }
            _ => {}
        }
    }

    /// Scores of node `i` as sorted `(label, score)` pairs.
    pub fn scores(&self, g: &Graph, rule: &Rule, i: usize) -> Vec<(usize, f64)> {
        let mut buf = ScoreBuf::new(g.node_count());
        self.score_into(g, rule, i, &mut buf);
        buf.entries()
    }

    /// Recomputes every aggregate from the labels and compares with the
    /// incremental values, allowing `tol` absolute error on weights.
    pub fn is_consistent(&self, g: &Graph, tol: f64) -> bool {
        let mut fresh = self.clone();
        fresh.recount(g);
        fresh.sizes == self.sizes
            && fresh
                .group_degree
                .iter()
                .zip(&self.group_degree)
                .all(|(a, b)| (a - b).abs() <= tol)
            && fresh
                .own_weight
                .iter()
                .zip(&self.own_weight)
                .all(|(a, b)| (a - b).abs() <= tol)
    }
}

/// Per-node leading-eigenvector preferences, one eigenvector per group.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPrefs {
    pub values: Vec<f64>,
    pub converged: bool,
}

/// Power iteration on each group's induced adjacency (shifted by the
/// identity so bipartite groups converge), normalized to unit maximum.
/// Groups with no internal weight get preference 1.
pub fn eigenvector_prefs(g: &Graph, p: &Partition) -> EigenPrefs {
    const TOL: f64 = 1e-10;
    const MAX_ITERS: usize = 1000;
    let mut values = vec![1.0; g.node_count()];
    let mut converged = true;
    for members in p.groups() {
        let (sub, map) = induced_subgraph(g, &members).expect("members are in range");
        if sub.total_weight() == 0.0 {
            continue;
        }
        let k = sub.node_count();
        let mut x = vec![1.0; k];
        let mut next = vec![0.0; k];
        let mut done = false;
        for _ in 0..MAX_ITERS {
            for v in 0..k {
                next[v] = x[v] * (1.0 + sub.loop_weight(v))
                    + sub.neighbors(v).map(|(u, w)| w * x[u]).sum::<f64>();
            }
            let max = next.iter().cloned().fold(0.0, f64::max);
            next.iter_mut().for_each(|v| *v /= max);
            let change = x
                .iter()
                .zip(&next)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            std::mem::swap(&mut x, &mut next);
            if change < TOL {
                done = true;
                break;
            }
        }
        converged &= done;
        for (v, &orig) in map.to_original.iter().enumerate() {
            values[orig] = x[v];
        }
    }
    EigenPrefs { values, converged }
}
