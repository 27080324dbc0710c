use std::collections::HashMap;

use labelprop::generators::{erdos_renyi, planted_partition, PlantedSpec};
use labelprop::graph::{quotient_graph, split_into_components};
use labelprop::io::{self, IdMap};
use labelprop::objectives::{cut_weight, nmi, objective_f};
use labelprop::rules::{CitationMode, PreferenceMode, RuleState};
use labelprop::{Cover, Graph, GraphBuilder, Partition, Rule};
use proptest::prelude::*;

type Edges = Vec<(usize, usize, f64)>;

fn graph_strategy(max_n: usize, max_m: usize) -> impl Strategy<Value = (usize, Edges)> {
    (1..max_n).prop_flat_map(move |n| {
        let edge = (0..n, 0..n, 1u32..6).prop_map(|(u, v, w)| (u, v, w as f64));
        (Just(n), prop::collection::vec(edge, 0..max_m))
    })
}

fn labeled_graph() -> impl Strategy<Value = (usize, Edges, Vec<usize>)> {
    graph_strategy(25, 60)
        .prop_flat_map(|(n, edges)| (Just(n), Just(edges), prop::collection::vec(0..n, n)))
}

fn build(n: usize, edges: &[(usize, usize, f64)]) -> Graph {
    GraphBuilder::new().nodes(n).build(edges).unwrap()
}

/// Labels attaining the top score, compared with a relative tolerance.
fn argmax(scores: &[(usize, f64)]) -> Vec<usize> {
    let best = scores.iter().map(|s| s.1).fold(f64::NEG_INFINITY, f64::max);
    let tol = 1e-9 * best.abs().max(1.0);
    let mut top: Vec<usize> = scores
        .iter()
        .filter(|s| s.1 >= best - tol)
        .map(|s| s.0)
        .collect();
    top.sort_unstable();
    top
}

fn argmax_of(g: &Graph, rule: &Rule, labels: &[usize], i: usize) -> Vec<usize> {
    let state = RuleState::new(g, rule, labels.to_vec()).unwrap();
    argmax(&state.scores(g, rule, i))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn degrees_sum_to_twice_total_weight((n, edges) in graph_strategy(30, 80)) {
        let g = build(n, &edges);
        let m: f64 = edges.iter().map(|e| e.2).sum();
        prop_assert_eq!(g.degrees().iter().sum::<f64>(), 2.0 * m);
        prop_assert_eq!(g.total_weight(), m);
    }

    #[test]
    fn f_equals_twice_internal_weight((n, edges, labels) in labeled_graph()) {
        let g = build(n, &edges);
        let m: f64 = edges.iter().map(|e| e.2).sum();
        let cut: f64 = edges.iter().filter(|e| labels[e.0] != labels[e.1]).map(|e| e.2).sum();
        prop_assert_eq!(objective_f(&g, &labels), 2.0 * (m - cut));
        prop_assert_eq!(cut_weight(&g, &labels), cut);
        prop_assert!(objective_f(&g, &labels) <= 2.0 * m);
    }

    #[test]
    fn quotient_preserves_weight_and_f((n, edges, labels) in labeled_graph(), coarse in prop::collection::vec(0usize..4, 25)) {
        let g = build(n, &edges);
        let p = Partition::from_labels(&labels);
        let q = quotient_graph(&g, &p);
        prop_assert_eq!(q.node_count(), p.num_groups());
        prop_assert_eq!(q.total_weight(), g.total_weight());
        let index = p.group_index();
        prop_assert_eq!(objective_f(&q, &(0..q.node_count()).collect::<Vec<_>>()), objective_f(&g, &index));
        // A coarser labeling of the meta-nodes scores the same on both graphs.
        let over: Vec<usize> = (0..q.node_count()).map(|k| coarse[k % coarse.len()]).collect();
        let lifted: Vec<usize> = index.iter().map(|&k| over[k]).collect();
        prop_assert_eq!(objective_f(&q, &over), objective_f(&g, &lifted));
    }

    #[test]
    fn incremental_state_matches_recount((n, edges, labels) in labeled_graph(), moves in prop::collection::vec((0usize..25, 0usize..25), 1..40)) {
        let g = build(n, &edges);
        for rule in [Rule::Standard, Rule::Defensive, Rule::Offensive] {
            let mut state = RuleState::new(&g, &rule, labels.clone()).unwrap();
            for &(i, l) in &moves {
                state.move_node(&g, i % n, l % n);
                prop_assert!(state.is_consistent(&g, 1e-9));
            }
        }
    }

    #[test]
    fn reductions_share_the_standard_argmax((n, edges, labels) in labeled_graph()) {
        let g = build(n, &edges);
        let same = [
            Rule::Cpm { lambda: 0.0 },
            Rule::Modularity { lambda: 0.0 },
            Rule::GeneralTau { tau: 1.0 },
            Rule::Preference { prefs: vec![1.0; n], mode: PreferenceMode::Promote },
            Rule::Balanced { gamma: 0.0, defensive: false },
        ];
        for i in (0..n).filter(|&i| g.neighbors(i).any(|(j, _)| j != i)) {
            let base = argmax_of(&g, &Rule::Standard, &labels, i);
            for rule in &same {
                prop_assert_eq!(&argmax_of(&g, rule, &labels, i), &base, "{:?} at node {}", rule, i);
            }
        }
    }

    #[test]
    fn argmax_is_weight_scale_invariant((n, edges, labels) in labeled_graph(), scale in 0.01f64..100.0) {
        let g = build(n, &edges);
        let scaled: Edges = edges.iter().map(|&(u, v, w)| (u, v, w * scale)).collect();
        let h = build(n, &scaled);
        for i in 0..n {
            prop_assert_eq!(argmax_of(&g, &Rule::Standard, &labels, i), argmax_of(&h, &Rule::Standard, &labels, i));
        }
    }

    #[test]
    fn nmi_is_symmetric_and_relabel_invariant(a in prop::collection::vec(0usize..5, 1..60), seed in 0usize..1000) {
        let b: Vec<usize> = a.iter().enumerate().map(|(i, &x)| (x * 7 + i * seed) % 4).collect();
        let (pa, pb) = (Partition::from_labels(&a), Partition::from_labels(&b));
        let ab = nmi(&pa, &pb).unwrap();
        prop_assert!((ab - nmi(&pb, &pa).unwrap()).abs() <= 1e-12);
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&ab));
        let renamed: Vec<usize> = a.iter().map(|&x| 100 - x).collect();
        prop_assert!((nmi(&pa, &Partition::from_labels(&renamed)).unwrap() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn split_groups_are_connected((n, edges, labels) in labeled_graph()) {
        let g = build(n, &edges);
        let p = split_into_components(&g, &labels);
        prop_assert!(Partition::from_labels(&labels).coarsens(&p));
        for members in p.groups() {
            let (sub, _) = labelprop::graph::induced_subgraph(&g, &members).unwrap();
            prop_assert_eq!(labelprop::graph::connected_components(&sub).num_groups(), 1);
        }
    }

    #[test]
    fn cover_weights_are_normalized(raw in prop::collection::vec(prop::collection::vec((0usize..10, 0.0f64..5.0), 1..5), 1..30)) {
        let raw: Vec<Vec<(usize, f64)>> = raw
            .into_iter()
            .map(|mut a| {
                a[0].1 += 0.1;
                a.sort_by_key(|e| e.0);
                a.dedup_by_key(|e| e.0);
                a
            })
            .collect();
        let c = Cover::new(raw);
        for i in 0..c.len() {
            let sum: f64 = c.node(i).iter().map(|e| e.1).sum();
            prop_assert!((sum - 1.0).abs() <= 1e-9);
            prop_assert!(c.node(i).iter().all(|e| e.1 > 0.0));
        }
        let text = io::write_cover(&c, &IdMap::numeric(c.len()));
        let back = io::parse_cover(&text, &IdMap::numeric(c.len())).unwrap();
        for i in 0..c.len() {
            let sum: f64 = back.node(i).iter().map(|e| e.1).sum();
            prop_assert!((sum - 1.0).abs() <= 1e-6);
        }
    }

    #[test]
    fn partition_tsv_round_trips(labels in prop::collection::vec(0usize..8, 1..80)) {
        let p = Partition::from_labels(&labels);
        let ids = IdMap::numeric(p.len());
        prop_assert_eq!(io::parse_partition(&io::write_partition(&p, &ids), &ids).unwrap(), p);
    }

    #[test]
    fn edge_list_round_trips((n, edges) in graph_strategy(25, 60), scale in 0.001f64..1000.0) {
        let scaled: Edges = edges.iter().map(|&(u, v, w)| (u, v, w * scale)).collect();
        let g = build(n, &scaled);
        let ids = IdMap::numeric(n);
        let text = io::write_edge_list(&g, &ids);
        let back = io::parse_edge_list(&text, None).unwrap().graph;
        let rel = |a: f64, b: f64| (a - b).abs() <= 1e-11 * a.abs().max(b.abs());
        let (e1, e2) = (g.edges(), back.edges());
        prop_assert_eq!(e1.len(), e2.len());
        for (x, y) in e1.iter().zip(&e2) {
            prop_assert_eq!((x.0, x.1), (y.0, y.1));
            prop_assert!(rel(x.2, y.2));
        }
    }
}

/// Brute-force cocitation: shared out-neighbors between `i` and each `j`.
fn cocitation_oracle(
    n: usize,
    arcs: &[(usize, usize)],
    labels: &[usize],
    i: usize,
) -> HashMap<usize, f64> {
    let out = |x: usize| arcs.iter().filter(move |a| a.0 == x).map(|a| a.1);
    let mut score = HashMap::new();
    for j in (0..n).filter(|&j| j != i) {
        let shared = out(i).filter(|k| out(j).any(|t| t == *k)).count();
        if shared > 0 {
            *score.entry(labels[j]).or_insert(0.0) += shared as f64;
        }
    }
    score
}

#[test]
fn cocitation_matches_shared_target_counts() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(20);
    for _ in 0..30 {
        let n = 20;
        let mut arcs = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(0.15) {
                    arcs.push((u, v));
                }
            }
        }
        let weighted: Edges = arcs.iter().map(|&(u, v)| (u, v, 1.0)).collect();
        let g = GraphBuilder::new()
            .nodes(n)
            .directed(true)
            .build(&weighted)
            .unwrap();
        let labels: Vec<usize> = (0..n).map(|_| rng.gen_range(0..5)).collect();
        let rule = Rule::Citation(CitationMode::Cocitation);
        let state = RuleState::new(&g, &rule, labels.clone()).unwrap();
        for i in 0..n {
            let got: HashMap<usize, f64> = state
                .scores(&g, &rule, i)
                .into_iter()
                .filter(|s| s.1 != 0.0)
                .collect();
            assert_eq!(got, cocitation_oracle(n, &arcs, &labels, i), "node {i}");
        }
    }
}

#[test]
fn er_mean_degree_and_edge_count() {
    let (n, k) = (10_000, 10.0);
    let p = k / (n as f64 - 1.0);
    let pairs = (n * (n - 1) / 2) as f64;
    let sigma = (pairs * p * (1.0 - p)).sqrt();
    let mut mean = 0.0;
    for seed in 0..10 {
        let g = erdos_renyi(n, k, seed).unwrap();
        let m = g.total_weight();
        assert!((m - pairs * p).abs() <= 3.0 * sigma, "seed {seed}: m = {m}");
        mean += 2.0 * m / n as f64 / 10.0;
    }
    assert!((mean - k).abs() <= 0.05 * k, "mean degree {mean}");
}

#[test]
fn planted_external_fraction_tracks_mu() {
    for (n, mu, tol) in [
        (128, 0.1, 0.03),
        (1024, 0.1, 0.02),
        (1024, 0.3, 0.02),
        (128, 1.0, 0.02),
    ] {
        let mut total = 0.0;
        for seed in 0..10 {
            let spec = PlantedSpec {
                n,
                groups: 4,
                avg_degree: 16.0,
                mu,
                seed,
            };
            let (g, truth) = planted_partition(&spec).unwrap();
            total += cut_weight(&g, truth.labels()) / g.total_weight() / 10.0;
        }
        assert!((total - mu).abs() <= tol, "n={n} mu={mu}: measured {total}");
    }
}
