mod common;

use common::*;
use proptest::prelude::*;
use treemap_core::game::{congestion_oracle_from_stretch, transform_cap_to_len, transform_len_to_cap};
use treemap_core::mapping::{
    canonical_mapping, prob_congestion, prob_stretch, weighted_congestion_objective, weighted_stretch_objective,
};
use treemap_core::oracle::{enumerate_spanning_trees, ConfiguredOracle};
use treemap_core::{Graph, ProbabilisticMapping};

fn graph_and_keys(weight: BoxedStrategy<f64>) -> impl Strategy<Value = (Graph, Vec<u32>)> {
    arb_graph(8, 8, weight).prop_flat_map(|g| {
        let m = g.n_edges();
        (Just(g), prop::collection::vec(any::<u32>(), m))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn canonical_mapping_matches_tree_paths((g, keys) in graph_and_keys(positive_weight())) {
        let t = tree_from_keys(&g, &keys);
        let m = canonical_mapping(&g, &t).unwrap();
        let (s, c) = (m.stretches(&g.lengths()), m.congestions(&g.capacities()));
        for (a, b) in s.iter().zip(naive_stretches(&g, &t)) {
            prop_assert!(close(*a, b, 1e-12));
        }
        for (a, b) in c.iter().zip(naive_congestions(&g, &t)) {
            prop_assert!(close(*a, b, 1e-12));
        }
    }

    #[test]
    fn stretch_and_congestion_bounds(
        (g, keys) in graph_and_keys(positive_weight()),
        other in prop::collection::vec(any::<u32>(), 16),
        theta in 0.0f64..=1.0,
    ) {
        let t = tree_from_keys(&g, &keys);
        let pm = ProbabilisticMapping::single(t.clone()).mix(&ProbabilisticMapping::single(tree_from_keys(&g, &other)), theta).unwrap();
        let s = prob_stretch(&pm, &g, &g.lengths()).unwrap();
        let c = prob_congestion(&pm, &g, &g.capacities()).unwrap();
        let shortest = (0..g.n_edges()).min_by(|&a, &b| g.edge(a).length.total_cmp(&g.edge(b).length)).unwrap();
        prop_assert!(s.per_edge[shortest] >= 1.0 - 1e-12);
        prop_assert!(c.overall >= 1.0 - 1e-12);

        let single = ProbabilisticMapping::single(t.clone());
        let s = prob_stretch(&single, &g, &g.lengths()).unwrap();
        let c = prob_congestion(&single, &g, &g.capacities()).unwrap();
        for id in 0..g.n_edges() {
            if t.contains(id) {
                prop_assert_eq!(s.per_edge[id], 1.0);
                prop_assert!(c.per_edge[id] >= 1.0 - 1e-12);
            } else {
                prop_assert_eq!(c.per_edge[id], 0.0);
            }
        }
    }

    #[test]
    fn substitution_identity(
        (g, keys) in graph_and_keys(positive_weight()),
        raw in prop::collection::vec(0.01f64..5.0, 16),
    ) {
        let t = tree_from_keys(&g, &keys);
        let m = canonical_mapping(&g, &t).unwrap();
        let beta: Vec<f64> = (0..g.n_edges()).map(|i| raw[i % raw.len()]).collect();
        let c = g.capacities();
        let sub = transform_cap_to_len(&beta, &c).unwrap();
        prop_assert!(sub.floored.is_empty());
        let stretch = weighted_stretch_objective(&m, &sub.weights, &sub.values).unwrap();
        let congestion = weighted_congestion_objective(&m, &beta, &c).unwrap();
        prop_assert!(close(stretch, congestion, 1e-12));

        // and back from lengths to capacities
        let l = g.lengths();
        let back = transform_len_to_cap(&beta, &l).unwrap();
        let stretch = weighted_stretch_objective(&m, &beta, &l).unwrap();
        let congestion = weighted_congestion_objective(&m, &back.weights, &back.values).unwrap();
        prop_assert!(close(stretch, congestion, 1e-12));
    }

    #[test]
    fn zero_weights_stay_within_reported_bound(
        (g, _) in graph_and_keys(positive_weight()),
        raw in prop::collection::vec(prop_oneof![Just(0.0), 0.01f64..5.0], 16),
    ) {
        let beta: Vec<f64> = (0..g.n_edges()).map(|i| raw[i % raw.len()]).collect();
        prop_assume!(beta.iter().any(|&b| b > 0.0));
        let mut oracle = congestion_oracle_from_stretch(ConfiguredOracle::exact(100_000).unwrap(), &g.capacities());
        let r = oracle.respond_detailed(&g, &beta).unwrap();
        let gap = (r.response.achieved - r.transformed_value).abs();
        prop_assert!(gap <= r.perturbation_bound + 1e-9 * r.response.achieved.max(1.0));
    }

    #[test]
    fn averages_are_linear_in_the_mixture(
        (g, keys) in graph_and_keys(positive_weight()),
        other in prop::collection::vec(any::<u32>(), 16),
        theta in 0.0f64..=1.0,
    ) {
        let a = ProbabilisticMapping::single(tree_from_keys(&g, &keys));
        let b = ProbabilisticMapping::single(tree_from_keys(&g, &other));
        let mix = a.mix(&b, theta).unwrap();
        let (l, c) = (g.lengths(), g.capacities());
        let (sa, sb, sm) = (prob_stretch(&a, &g, &l).unwrap(), prob_stretch(&b, &g, &l).unwrap(), prob_stretch(&mix, &g, &l).unwrap());
        let (ca, cb, cm) = (prob_congestion(&a, &g, &c).unwrap(), prob_congestion(&b, &g, &c).unwrap(), prob_congestion(&mix, &g, &c).unwrap());
        for id in 0..g.n_edges() {
            prop_assert!(close(sm.per_edge[id], theta * sa.per_edge[id] + (1.0 - theta) * sb.per_edge[id], 1e-12));
            prop_assert!(close(cm.per_edge[id], theta * ca.per_edge[id] + (1.0 - theta) * cb.per_edge[id], 1e-12));
        }
    }
}

#[test]
fn enumeration_finds_distinct_trees_only() {
    // K4 has 16 spanning trees
    let g = Graph::unit(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
    let mut trees = enumerate_spanning_trees(&g, 100).unwrap();
    assert_eq!(trees.len(), 16);
    trees.sort();
    trees.dedup();
    assert_eq!(trees.len(), 16);
}
