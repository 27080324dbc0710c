//! Seeded reproductions of the pipeline behaviors on small fixtures.

use labelprop::engine::{active_passive_run, check_equilibrium};
use labelprop::generators::{
    nested_planted, planted_partition, split_grid_fixture, NestedSpec, PlantedSpec,
};
use labelprop::objectives::{hamiltonian, modularity_q, nmi, Hamiltonian};
use labelprop::pipelines::*;
use labelprop::{run, Graph, Partition, Rule, RunConfig};

fn count(seeds: u64, f: impl Fn(u64) -> bool) -> usize {
    (0..seeds).filter(|&s| f(s)).count()
}

fn cfg(seed: u64) -> RunConfig {
    RunConfig::default().with_seed(seed)
}

fn planted(n: usize, mu: f64, seed: u64) -> (Graph, Partition) {
    planted_partition(&PlantedSpec::four_groups(n, 16.0, mu, seed)).unwrap()
}

#[test]
fn active_passive_ends_at_equilibrium() {
    for s in 0..5 {
        let (g, _) = planted(1024, 0.1, s);
        let r = active_passive_run(&g, &Rule::Standard, &cfg(s)).unwrap();
        assert!(r.converged);
        assert!(check_equilibrium(&g, &Rule::Standard, r.partition.labels()).unwrap());
    }
}

#[test]
fn modularity_rule_reaches_positive_q() {
    for s in 0..5 {
        let (g, _) = planted(128, 0.1, s);
        let m = g.total_weight();
        let p = run(&g, &Rule::modularity_for(&g), &cfg(s))
            .unwrap()
            .partition;
        let q = modularity_q(&g, p.labels()).unwrap();
        let h2 = hamiltonian(&g, p.labels(), Hamiltonian::Degree(1.0 / (2.0 * m)));
        assert!(q >= 0.0);
        assert!((h2 + 2.0 * m * q).abs() <= 1e-9 * h2.abs().max(1.0));
    }
}

#[test]
fn consensus_recovers_planted_groups() {
    let hits = count(25, |t| {
        let (g, truth) = planted(128, 0.33, t);
        let cfg = cfg(t).with_tie(labelprop::TiePolicy::Random);
        let r = consensus(
            &g,
            &Rule::Standard,
            &cfg,
            25,
            DEFAULT_CONSENSUS_THRESHOLD,
            DEFAULT_CONSENSUS_ROUNDS,
        )
        .unwrap();
        nmi(&r.partition, &truth).unwrap() >= 0.95
    });
    assert!(hits >= 20, "{hits}/25");
}

fn nested(degree_sibling: f64, seed: u64) -> (Graph, Partition, Partition) {
    nested_planted(&NestedSpec {
        supergroups: 2,
        groups_per_super: 2,
        group_size: 64,
        degree_in: 24.0,
        degree_sibling,
        degree_out: 1.0,
        seed,
    })
    .unwrap()
}

#[test]
fn hierarchy_level_zero_finds_fine_groups() {
    let hits = count(25, |s| {
        let (g, fine, _) = nested(4.0, s);
        let h = hierarchy_agglomerate(&g, &Rule::Standard, &cfg(s)).unwrap();
        nmi(&h.lifted(0), &fine).unwrap() >= 0.9
    });
    assert!(hits >= 18, "{hits}/25");
}

// Sibling groups only merge once their joint weight beats the loop weight,
// so the coarse level is checked on a separate, sibling-heavy fixture.
#[test]
fn hierarchy_reaches_coarse_groups() {
    let hits = count(25, |s| {
        let (g, _, coarse) = nested(16.0, s);
        let h = hierarchy_agglomerate(&g, &Rule::Standard, &cfg(s)).unwrap();
        (0..h.len()).any(|t| nmi(&h.lifted(t), &coarse).unwrap() >= 0.9)
    });
    assert!(hits >= 18, "{hits}/25");
}

#[test]
fn disjoint_triangles_stop_after_one_level() {
    let g = Graph::from_pairs(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
    for s in 0..5 {
        let h = hierarchy_agglomerate(&g, &Rule::Standard, &cfg(s)).unwrap();
        assert_eq!(h.len(), 1);
        assert_eq!(h.lifted(0), Partition::from_labels(&[0, 0, 0, 1, 1, 1]));
    }
}

#[test]
fn refinement_splits_loose_triangles() {
    let barbell =
        Graph::from_pairs(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)]).unwrap();
    let merged = Hierarchy::new(vec![Partition::single_group(6)]).unwrap();
    let hits = count(25, |s| {
        let h = hierarchy_refine(&barbell, &merged, &Rule::Standard, &cfg(s)).unwrap();
        h.lifted(0) == Partition::from_labels(&[0, 0, 0, 1, 1, 1])
    });
    assert!(hits >= 20, "{hits}/25");
}

#[test]
fn refined_hierarchies_stay_nested() {
    for s in 0..10 {
        let (g, _) = planted(128, 0.3, s);
        let h = hierarchy_agglomerate(&g, &Rule::Standard, &cfg(s)).unwrap();
        let r = hierarchy_refine(&g, &h, &Rule::Standard, &cfg(s)).unwrap();
        assert_eq!(r.len(), h.len());
        for t in 1..r.len() {
            assert!(r.lifted(t).coarsens(&r.lifted(t - 1)));
        }
        for t in 0..r.len() {
            assert!(h.lifted(t).coarsens(&r.lifted(t)));
        }
    }
}

#[test]
fn copra_shares_the_overlap_node() {
    let (g, _) = labelprop::generators::overlapping_cliques(5, 1).unwrap();
    let hits = count(25, |s| {
        copra(&g, CopraMode::MaxGroups(2), 100, s)
            .unwrap()
            .cover
            .node(4)
            .len()
            == 2
    });
    assert!(hits >= 13, "{hits}/25");
}

#[test]
fn copra_relative_mode_normalizes() {
    let (g, _) = planted(128, 0.2, 1);
    let r = copra(&g, CopraMode::Relative(0.5), 100, 1).unwrap();
    for a in r.cover.affiliations() {
        let max = a.iter().map(|e| e.1).fold(0.0, f64::max);
        assert!((a.iter().map(|e| e.1).sum::<f64>() - 1.0).abs() < 1e-9);
        assert!(a.iter().all(|e| e.1 >= 0.5 * max - 1e-12));
    }
}

#[test]
fn memory_lpa_separates_disjoint_cliques() {
    let k4s = Graph::from_pairs(
        8,
        &[
            (0, 1),
            (0, 2),
            (0, 3),
            (1, 2),
            (1, 3),
            (2, 3),
            (4, 5),
            (4, 6),
            (4, 7),
            (5, 6),
            (5, 7),
            (6, 7),
        ],
    )
    .unwrap();
    let want = Partition::from_labels(&[0, 0, 0, 0, 1, 1, 1, 1]);
    let hits = count(25, |s| {
        memory_lpa(&k4s, DEFAULT_MEMORY_ITERS, 0.3, s)
            .unwrap()
            .cover
            .to_partition()
            == Some(want.clone())
    });
    assert!(hits >= 23, "{hits}/25");
}

#[test]
fn two_step_keeps_plain_communities() {
    let hits = count(25, |s| {
        let (g, _) = planted(128, 0.1, s);
        let r = two_step_equivalence(&g, &cfg(s)).unwrap();
        r.partition == r.communities
    });
    assert!(hits >= 20, "{hits}/25");
}

#[test]
fn two_step_splits_hubs_from_leaves() {
    let hubs = Graph::from_pairs(
        6,
        &[
            (0, 2),
            (0, 3),
            (0, 4),
            (0, 5),
            (1, 2),
            (1, 3),
            (1, 4),
            (1, 5),
        ],
    )
    .unwrap();
    let want = Partition::from_labels(&[0, 0, 1, 1, 1, 1]);
    let hits = count(25, |s| {
        let r = two_step_equivalence(&hubs, &cfg(s)).unwrap();
        r.communities.num_groups() == 1 && r.partition == want
    });
    assert!(hits >= 18, "{hits}/25");
}

#[test]
fn offensive_refinement_shrinks_grid_group_count() {
    let g = split_grid_fixture();
    let hits = count(25, |s| {
        let r = defensive_then_offensive(&g, &cfg(s)).unwrap();
        r.partition.num_groups() < r.defensive.num_groups()
    });
    assert!(hits >= 18, "{hits}/25");
}

#[test]
fn offensive_refinement_recovers_planted_groups() {
    let hits = count(25, |s| {
        let (g, truth) = planted(128, 0.1, s);
        nmi(
            &defensive_then_offensive(&g, &cfg(s)).unwrap().partition,
            &truth,
        )
        .unwrap()
            >= 0.9
    });
    assert!(hits >= 20, "{hits}/25");
}

#[test]
fn relabel_counts_decay() {
    let hits = count(25, |s| {
        let (g, _) = planted(10_000, 0.1, s);
        let c = run(&g, &Rule::Standard, &cfg(s)).unwrap().relabel_counts;
        c.len() < 5 || c[0] >= c[4]
    });
    assert!(hits >= 23, "{hits}/25");
}
