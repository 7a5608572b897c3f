mod common;

use common::*;
use proptest::prelude::*;
use treemap_core::bisection::*;
use treemap_core::{Graph, SpanningTree};

/// Every balanced labelling with vertex 0 on side 0.
fn balanced_labellings(n: usize) -> Vec<Vec<u8>> {
    (0u32..1 << (n - 1))
        .filter(|mask| 2 * mask.count_ones() as usize == n)
        .map(|mask| (0..n).map(|v| if v == 0 { 0 } else { ((mask >> (v - 1)) & 1) as u8 }).collect())
        .collect()
}

fn crossing(edges: &[(usize, usize, f64)], side_of: &[u8]) -> f64 {
    edges.iter().filter(|(u, v, _)| side_of[*u] != side_of[*v]).map(|(_, _, w)| w).sum()
}

fn arb_tree(max_n: usize) -> impl Strategy<Value = (usize, Vec<(usize, usize, f64)>)> {
    (1..=max_n / 2)
        .prop_flat_map(|half| {
            let n = 2 * half;
            let parents: Vec<_> = (1..n).map(|v| 0..v).collect();
            (Just(n), parents, prop::collection::vec(dyadic_weight(), n - 1))
        })
        .prop_map(|(n, parents, w)| (n, parents.iter().enumerate().map(|(i, &p)| (p, i + 1, w[i])).collect()))
}

fn even_graph_and_tree(max_n: usize) -> impl Strategy<Value = (Graph, SpanningTree)> {
    arb_graph(max_n, 8, dyadic_weight())
        .prop_filter("even vertex count", |g| g.n_vertices() % 2 == 0)
        .prop_flat_map(|g| {
            let m = g.n_edges();
            (Just(g), prop::collection::vec(any::<u32>(), m))
        })
        .prop_map(|(g, keys)| {
            let t = tree_from_keys(&g, &keys);
            (g, t)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn tree_dp_is_optimal((n, edges) in arb_tree(12)) {
        let dp = bisect_weighted_tree(n, &edges).unwrap();
        let best = balanced_labellings(n).iter().map(|s| crossing(&edges, s)).fold(f64::INFINITY, f64::min);
        prop_assert_eq!(dp.tree_width, best);
        prop_assert_eq!(crossing(&edges, &dp.side_of), best);
        prop_assert_eq!(2 * dp.side_of.iter().filter(|&&s| s == 1).count(), n);
        let mut cut: Vec<usize> = (0..edges.len()).filter(|&k| dp.side_of[edges[k].0] != dp.side_of[edges[k].1]).collect();
        cut.sort_unstable();
        prop_assert_eq!(dp.cut_edges, cut);
    }

    #[test]
    fn tree_loads_match_naive((g, t) in even_graph_and_tree(10)) {
        let loads = compute_tree_loads(&g, &t).unwrap();
        let naive = naive_loads(&g, &t);
        for (&id, &l) in t.edges().iter().zip(&loads.loads) {
            prop_assert!(close(l, naive[id], 1e-12));
        }
    }

    #[test]
    fn domination((g, t) in even_graph_and_tree(8)) {
        let loads = compute_tree_loads(&g, &t).unwrap();
        for side_of in balanced_labellings(g.n_vertices()) {
            let width = induced_width(&g, &side_of).unwrap();
            prop_assert!(width <= loads.cut_load(&g, &side_of));
        }
    }

    #[test]
    fn brute_force_is_minimal(g in arb_graph(10, 10, dyadic_weight()).prop_filter("even", |g| g.n_vertices() % 2 == 0)) {
        let b = brute_force_bisection(&g).unwrap();
        let best = balanced_labellings(g.n_vertices()).iter().map(|s| induced_width(&g, s).unwrap()).fold(f64::INFINITY, f64::min);
        prop_assert_eq!(b.width, best);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn end_to_end_guarantee(g in arb_graph(8, 6, unit_weight()).prop_filter("even", |g| g.n_vertices() % 2 == 0)) {
        let out = min_bisection_approx(&g, &BisectionParams::default()).unwrap();
        let opt = brute_force_bisection(&g).unwrap().width;
        prop_assert!(out.best.width >= opt);
        prop_assert!(out.best.width <= out.certificate * opt * (1.0 + 1e-12));
        prop_assert_eq!(out.best.width, induced_width(&g, &out.best.side_of).unwrap());
        for r in &out.per_tree {
            prop_assert!(r.bisection.width <= r.tree_width * (1.0 + 1e-12));
        }
    }
}

#[test]
fn odd_and_unbalanced_inputs_are_rejected() {
    assert!(bisect_weighted_tree(3, &[(0, 1, 1.0), (1, 2, 1.0)]).is_err());
    let g = Graph::unit(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
    assert!(induced_width(&g, &[0, 0, 0, 1]).is_err());
    assert!(brute_force_bisection(&Graph::unit(3, &[(0, 1), (1, 2)]).unwrap()).is_err());
}
