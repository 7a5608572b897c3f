//! Naive reference computations and generators shared by the integration tests.
#![allow(dead_code)]

use proptest::prelude::*;
use treemap_core::{Edge, Graph, SpanningTree};

/// Edge ids of the tree path between `a` and `b`, by depth-first search.
pub fn tree_path(g: &Graph, t: &SpanningTree, a: usize, b: usize) -> Vec<usize> {
    let mut adj = vec![Vec::new(); g.n_vertices()];
    for &id in t.edges() {
        let e = g.edge(id);
        adj[e.u].push((id, e.v));
        adj[e.v].push((id, e.u));
    }
    let mut via = vec![None; g.n_vertices()];
    let mut seen = vec![false; g.n_vertices()];
    let mut stack = vec![a];
    seen[a] = true;
    while let Some(x) = stack.pop() {
        for &(id, y) in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                via[y] = Some((id, x));
                stack.push(y);
            }
        }
    }
    let mut path = Vec::new();
    let mut x = b;
    while x != a {
        let (id, prev) = via[x].expect("tree spans the graph");
        path.push(id);
        x = prev;
    }
    path
}

pub fn naive_stretches(g: &Graph, t: &SpanningTree) -> Vec<f64> {
    (0..g.n_edges())
        .map(|i| {
            let e = g.edge(i);
            let d: f64 = tree_path(g, t, e.u, e.v).iter().map(|&j| g.edge(j).length).sum();
            d / e.length
        })
        .collect()
}

pub fn naive_loads(g: &Graph, t: &SpanningTree) -> Vec<f64> {
    let mut loads = vec![0.0; g.n_edges()];
    for i in 0..g.n_edges() {
        let e = g.edge(i);
        for j in tree_path(g, t, e.u, e.v) {
            loads[j] += e.capacity;
        }
    }
    loads
}

pub fn naive_congestions(g: &Graph, t: &SpanningTree) -> Vec<f64> {
    naive_loads(g, t).iter().enumerate().map(|(j, x)| x / g.edge(j).capacity).collect()
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Kruskal over the edges in the order of `keys`.
pub fn tree_from_keys(g: &Graph, keys: &[u32]) -> SpanningTree {
    let mut order: Vec<usize> = (0..g.n_edges()).collect();
    order.sort_by_key(|&i| (keys[i % keys.len()], i));
    let mut parent: Vec<usize> = (0..g.n_vertices()).collect();
    let mut edges = Vec::new();
    for id in order {
        let e = g.edge(id);
        let (a, b) = (find(&mut parent, e.u), find(&mut parent, e.v));
        if a != b {
            parent[a] = b;
            edges.push(id);
        }
    }
    SpanningTree::new(g, edges).expect("connected graph")
}

/// A connected multigraph on `2..=max_n` vertices: a random tree plus up to
/// `max_extra` further edges, with lengths and capacities from `weight`.
pub fn arb_graph(max_n: usize, max_extra: usize, weight: BoxedStrategy<f64>) -> impl Strategy<Value = Graph> {
    (2..=max_n)
        .prop_flat_map(move |n| {
            let parents: Vec<_> = (1..n).map(|v| 0..v).collect();
            let extra = prop::collection::vec((0..n, 0..n), 0..=max_extra);
            (Just(n), parents, extra)
        })
        .prop_flat_map(move |(n, parents, extra)| {
            let mut pairs: Vec<(usize, usize)> = parents.iter().enumerate().map(|(i, &p)| (p, i + 1)).collect();
            pairs.extend(extra.into_iter().filter(|(a, b)| a != b));
            let m = pairs.len();
            let weights = prop::collection::vec((weight.clone(), weight.clone()), m);
            (Just(n), Just(pairs), weights)
        })
        .prop_map(|(n, pairs, weights)| {
            let edges = pairs.iter().zip(weights).map(|(&(u, v), (l, c))| Edge::new(u, v, l, c)).collect();
            Graph::new(n, edges).unwrap()
        })
}

pub fn positive_weight() -> BoxedStrategy<f64> {
    (0.1f64..10.0).boxed()
}

pub fn unit_weight() -> BoxedStrategy<f64> {
    Just(1.0).boxed()
}

/// Multiples of 1/8 in `[1/8, 8]`, so sums of a few are exact.
pub fn dyadic_weight() -> BoxedStrategy<f64> {
    (1u32..=64).prop_map(|k| k as f64 / 8.0).boxed()
}

pub fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}
