//! Weighted multigraphs, spanning trees and the handful of classical routines
//! (connectivity, shortest-path trees, minimum spanning trees) the rest of the
//! crate builds on.
//!
//! Every edge carries a strictly positive length (used by stretch) and a
//! strictly positive capacity (used by congestion). Parallel edges are kept
//! apart with their own ids; self-loops are rejected. Whenever a routine has
//! to choose between equally good edges it takes the smallest edge id.

use alloc::collections::{BinaryHeap, VecDeque};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::{Ordering, Reverse};

use crate::error::{invalid, Error, Result};

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub length: f64,
    pub capacity: f64,
}

impl Edge {
    pub fn new(u: VertexId, v: VertexId, length: f64, capacity: f64) -> Self {
        Edge { u, v, length, capacity }
    }

    pub fn unit(u: VertexId, v: VertexId) -> Self {
        Edge::new(u, v, 1.0, 1.0)
    }

    /// The endpoint opposite to `x`.
    pub fn other(&self, x: VertexId) -> VertexId {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

/// An undirected multigraph with positive lengths and capacities.
///
/// Immutable once built; edge ids are the positions in [`Graph::edges`].
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
}

impl Graph {
    pub fn new(n_vertices: usize, edges: Vec<Edge>) -> Result<Self> {
        for (id, e) in edges.iter().enumerate() {
            if e.u >= n_vertices || e.v >= n_vertices {
                return Err(invalid!("edge {id} has endpoint outside [0, {n_vertices}): ({}, {})", e.u, e.v));
            }
            if e.u == e.v {
                return Err(invalid!("edge {id} is a self-loop at vertex {}", e.u));
            }
            check_positive("length", id, e.length)?;
            check_positive("capacity", id, e.capacity)?;
        }
        Ok(Graph { n: n_vertices, edges })
    }

    /// Graph with unit lengths and capacities.
    pub fn unit(n_vertices: usize, pairs: &[(VertexId, VertexId)]) -> Result<Self> {
        Graph::new(n_vertices, pairs.iter().map(|&(u, v)| Edge::unit(u, v)).collect())
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id]
    }

    pub fn lengths(&self) -> Vec<f64> {
        self.edges.iter().map(|e| e.length).collect()
    }

    pub fn capacities(&self) -> Vec<f64> {
        self.edges.iter().map(|e| e.capacity).collect()
    }

    /// Same topology with the lengths replaced.
    pub fn with_lengths(&self, lengths: &[f64]) -> Result<Self> {
        check_len(lengths, self.n_edges())?;
        let edges = self.edges.iter().zip(lengths).map(|(e, &l)| Edge { length: l, ..*e }).collect();
        Graph::new(self.n, edges)
    }

    /// Same topology with the capacities replaced.
    pub fn with_capacities(&self, capacities: &[f64]) -> Result<Self> {
        check_len(capacities, self.n_edges())?;
        let edges = self.edges.iter().zip(capacities).map(|(e, &c)| Edge { capacity: c, ..*e }).collect();
        Graph::new(self.n, edges)
    }

    /// Incidence lists `(edge id, neighbour)`, each sorted by edge id.
    pub fn adjacency(&self) -> Vec<Vec<(EdgeId, VertexId)>> {
        let mut adj = vec![Vec::new(); self.n];
        for (id, e) in self.edges.iter().enumerate() {
            adj[e.u].push((id, e.v));
            adj[e.v].push((id, e.u));
        }
        adj
    }
}

fn check_positive(what: &str, id: EdgeId, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(invalid!("edge {id} has nonpositive or non-finite {what} {x}"))
    }
}

pub(crate) fn check_len(xs: &[f64], m: usize) -> Result<()> {
    if xs.len() == m {
        Ok(())
    } else {
        Err(invalid!("expected {m} per-edge values, got {}", xs.len()))
    }
}

pub(crate) fn check_positive_weights(xs: &[f64], m: usize, what: &str) -> Result<()> {
    check_len(xs, m)?;
    for (id, &x) in xs.iter().enumerate() {
        check_positive(what, id, x)?;
    }
    Ok(())
}

/// Union-find with union by size and path halving.
#[derive(Debug, Clone)]
pub(crate) struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
    components: usize,
}

impl DisjointSets {
    pub(crate) fn new(n: usize) -> Self {
        DisjointSets { parent: (0..n).collect(), size: vec![1; n], components: n }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when `a` and `b` were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            core::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        self.components -= 1;
        true
    }

    /// Representative of `x` without path compression.
    pub(crate) fn root(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn components(&self) -> usize {
        self.components
    }
}

pub fn is_connected(g: &Graph) -> bool {
    if g.n_vertices() <= 1 {
        return true;
    }
    let mut sets = DisjointSets::new(g.n_vertices());
    for e in g.edges() {
        sets.union(e.u, e.v);
    }
    sets.components() == 1
}

/// A set of `n - 1` edge ids of a host graph forming a spanning tree.
///
/// Edge ids are kept sorted, so equal trees compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpanningTree {
    n_vertices: usize,
    n_graph_edges: usize,
    edges: Vec<EdgeId>,
}

impl SpanningTree {
    pub fn new(g: &Graph, mut edges: Vec<EdgeId>) -> Result<Self> {
        edges.sort_unstable();
        edges.dedup();
        let n = g.n_vertices();
        if edges.len() + 1 != n.max(1) {
            return Err(invalid!(
                "a spanning tree of a {n}-vertex graph has {} edges, got {}",
                n.saturating_sub(1),
                edges.len()
            ));
        }
        let mut sets = DisjointSets::new(n);
        for &id in &edges {
            if id >= g.n_edges() {
                return Err(invalid!("tree edge {id} is not an edge of the graph"));
            }
            let e = g.edge(id);
            if !sets.union(e.u, e.v) {
                return Err(invalid!("tree edges contain a cycle through edge {id}"));
            }
        }
        Ok(SpanningTree { n_vertices: n, n_graph_edges: g.n_edges(), edges })
    }

    /// Sorted tree edge ids.
    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn contains(&self, id: EdgeId) -> bool {
        self.edges.binary_search(&id).is_ok()
    }

    /// Edge ids of the host graph that are not in the tree.
    pub fn complement(&self) -> Vec<EdgeId> {
        (0..self.n_graph_edges).filter(|&id| !self.contains(id)).collect()
    }

    /// Whether this tree was built for a graph of the same shape as `g`.
    pub fn fits(&self, g: &Graph) -> bool {
        self.n_vertices == g.n_vertices() && self.n_graph_edges == g.n_edges()
    }

    /// `(vertex count, edge count)` of the host graph.
    pub fn host_shape(&self) -> (usize, usize) {
        (self.n_vertices, self.n_graph_edges)
    }

    pub(crate) fn check_host(&self, g: &Graph) -> Result<()> {
        if self.fits(g) {
            Ok(())
        } else {
            Err(invalid!(
                "tree built for a graph with {} vertices and {} edges used on one with {} and {}",
                self.n_vertices,
                self.n_graph_edges,
                g.n_vertices(),
                g.n_edges()
            ))
        }
    }
}

/// A spanning tree hung from a root, for path and subtree queries.
#[derive(Debug, Clone)]
pub(crate) struct RootedTree {
    pub(crate) parent: Vec<VertexId>,
    /// Edge to the parent; `usize::MAX` at the root.
    pub(crate) parent_edge: Vec<EdgeId>,
    pub(crate) depth: Vec<usize>,
    /// Vertices in breadth-first order from the root.
    pub(crate) order: Vec<VertexId>,
}

impl RootedTree {
    pub(crate) fn new(g: &Graph, t: &SpanningTree, root: VertexId) -> Self {
        let n = g.n_vertices();
        let mut adj = vec![Vec::new(); n];
        for &id in t.edges() {
            let e = g.edge(id);
            adj[e.u].push((id, e.v));
            adj[e.v].push((id, e.u));
        }
        let mut parent = vec![usize::MAX; n];
        let mut parent_edge = vec![usize::MAX; n];
        let mut depth = vec![0; n];
        let mut order = Vec::with_capacity(n);
        let mut seen = vec![false; n];
        let mut queue = VecDeque::new();
        if n > 0 {
            seen[root] = true;
            parent[root] = root;
            queue.push_back(root);
        }
        while let Some(x) = queue.pop_front() {
            order.push(x);
            for &(id, y) in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    parent[y] = x;
                    parent_edge[y] = id;
                    depth[y] = depth[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        RootedTree { parent, parent_edge, depth, order }
    }

    /// Tree edges on the path between `a` and `b`.
    pub(crate) fn path_edges(&self, mut a: VertexId, mut b: VertexId) -> Vec<EdgeId> {
        let mut from_a = Vec::new();
        let mut from_b = Vec::new();
        while self.depth[a] > self.depth[b] {
            from_a.push(self.parent_edge[a]);
            a = self.parent[a];
        }
        while self.depth[b] > self.depth[a] {
            from_b.push(self.parent_edge[b]);
            b = self.parent[b];
        }
        while a != b {
            from_a.push(self.parent_edge[a]);
            from_b.push(self.parent_edge[b]);
            a = self.parent[a];
            b = self.parent[b];
        }
        from_b.reverse();
        from_a.extend(from_b);
        from_a
    }

    pub(crate) fn lca(&self, mut a: VertexId, mut b: VertexId) -> VertexId {
        while self.depth[a] > self.depth[b] {
            a = self.parent[a];
        }
        while self.depth[b] > self.depth[a] {
            b = self.parent[b];
        }
        while a != b {
            a = self.parent[a];
            b = self.parent[b];
        }
        a
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Dist(f64);

impl Eq for Dist {}

impl PartialOrd for Dist {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dist {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Single-source shortest-path distances under `weights` (Dijkstra).
pub fn shortest_distances(g: &Graph, root: VertexId, weights: &[f64]) -> Result<Vec<f64>> {
    check_positive_weights(weights, g.n_edges(), "weight")?;
    if root >= g.n_vertices() {
        return Err(invalid!("root {root} out of range"));
    }
    let adj = g.adjacency();
    let mut dist = vec![f64::INFINITY; g.n_vertices()];
    let mut heap = BinaryHeap::new();
    dist[root] = 0.0;
    heap.push(Reverse((Dist(0.0), root)));
    while let Some(Reverse((Dist(d), x))) = heap.pop() {
        if d > dist[x] {
            continue;
        }
        for &(id, y) in &adj[x] {
            let nd = d + weights[id];
            if nd < dist[y] {
                dist[y] = nd;
                heap.push(Reverse((Dist(nd), y)));
            }
        }
    }
    Ok(dist)
}

/// Shortest-path tree from `root` under `weights`.
///
/// Each non-root vertex hangs from the smallest-id edge that is tight for its
/// distance. Positive weights make every tight edge point strictly closer to
/// the root, so the chosen edges are acyclic.
pub fn shortest_path_tree(g: &Graph, root: VertexId, weights: &[f64]) -> Result<SpanningTree> {
    let dist = shortest_distances(g, root, weights)?;
    if dist.iter().any(|d| d.is_infinite()) {
        return Err(Error::Disconnected);
    }
    let adj = g.adjacency();
    let mut tree = Vec::with_capacity(g.n_vertices().saturating_sub(1));
    for y in 0..g.n_vertices() {
        if y == root {
            continue;
        }
        // adjacency lists are sorted by edge id, so the first tight edge wins
        let parent_edge = adj[y]
            .iter()
            .find(|&&(id, x)| dist[x] + weights[id] == dist[y])
            .map(|&(id, _)| id)
            .ok_or_else(|| Error::Numerical(alloc::format!("no tight edge into vertex {y}")))?;
        tree.push(parent_edge);
    }
    SpanningTree::new(g, tree)
}

/// Minimum-total-weight spanning tree (Kruskal, ties by smallest edge id).
pub fn minimum_spanning_tree(g: &Graph, weights: &[f64]) -> Result<SpanningTree> {
    check_positive_weights(weights, g.n_edges(), "weight")?;
    let mut ids: Vec<EdgeId> = (0..g.n_edges()).collect();
    ids.sort_by(|&a, &b| weights[a].total_cmp(&weights[b]).then(a.cmp(&b)));
    let mut sets = DisjointSets::new(g.n_vertices());
    let mut tree = Vec::with_capacity(g.n_vertices().saturating_sub(1));
    for id in ids {
        let e = g.edge(id);
        if sets.union(e.u, e.v) {
            tree.push(id);
        }
    }
    if sets.components() > 1 {
        return Err(Error::Disconnected);
    }
    SpanningTree::new(g, tree)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle(lengths: [f64; 3]) -> Graph {
        let pairs = [(0, 1), (1, 2), (2, 0)];
        Graph::new(3, pairs.iter().zip(lengths).map(|(&(u, v), l)| Edge::new(u, v, l, 1.0)).collect()).unwrap()
    }

    fn four_cycle() -> Graph {
        Graph::unit(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap()
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(Graph::unit(2, &[(0, 0)]).is_err());
        assert!(Graph::unit(2, &[(0, 2)]).is_err());
        assert!(Graph::new(2, vec![Edge::new(0, 1, 0.0, 1.0)]).is_err());
        assert!(Graph::new(2, vec![Edge::new(0, 1, 1.0, -1.0)]).is_err());
        assert!(Graph::new(2, vec![Edge::new(0, 1, f64::NAN, 1.0)]).is_err());
        // parallel edges are fine
        assert_eq!(Graph::unit(2, &[(0, 1), (1, 0)]).unwrap().n_edges(), 2);
    }

    #[test]
    fn connectivity() {
        assert!(is_connected(&Graph::unit(2, &[(0, 1)]).unwrap()));
        assert!(!is_connected(&Graph::unit(2, &[]).unwrap()));
        assert!(is_connected(&four_cycle()));
    }

    #[test]
    fn spanning_tree_validation() {
        let g = four_cycle();
        assert!(SpanningTree::new(&g, vec![0, 1, 2]).is_ok());
        assert!(SpanningTree::new(&g, vec![0, 1]).is_err());
        let multi = Graph::unit(3, &[(0, 1), (0, 1), (1, 2)]).unwrap();
        assert!(SpanningTree::new(&multi, vec![0, 1]).is_err());
        assert_eq!(SpanningTree::new(&multi, vec![2, 1]).unwrap().edges(), &[1, 2]);
    }

    #[test]
    fn spt_of_a_path_is_the_path() {
        let g = Graph::unit(3, &[(0, 1), (1, 2)]).unwrap();
        let t = shortest_path_tree(&g, 0, &g.lengths()).unwrap();
        assert_eq!(t.edges(), &[0, 1]);
    }

    #[test]
    fn spt_triangle_skips_long_edge() {
        // vertex 1 touches both unit edges (0 and 1); edge 2 has length 10
        let g = triangle([1.0, 1.0, 10.0]);
        let t = shortest_path_tree(&g, 1, &g.lengths()).unwrap();
        assert_eq!(t.edges(), &[0, 1]);
    }

    #[test]
    fn spt_four_cycle_tie_break() {
        // vertex 2 is reachable by edge 1 or edge 2 at distance 2; edge 2 goes
        let g = four_cycle();
        let t = shortest_path_tree(&g, 0, &g.lengths()).unwrap();
        assert_eq!(t.edges(), &[0, 1, 3]);
    }

    #[test]
    fn spt_disconnected() {
        let g = Graph::unit(3, &[(0, 1)]).unwrap();
        assert_eq!(shortest_path_tree(&g, 0, &g.lengths()), Err(Error::Disconnected));
    }

    #[test]
    fn mst_prefers_short_edges() {
        let g = triangle([3.0, 1.0, 2.0]);
        assert_eq!(minimum_spanning_tree(&g, &g.lengths()).unwrap().edges(), &[1, 2]);
    }

    #[test]
    fn rooted_tree_paths() {
        let g = four_cycle();
        let t = SpanningTree::new(&g, vec![0, 1, 2]).unwrap();
        let r = RootedTree::new(&g, &t, 0);
        assert_eq!(r.path_edges(3, 0), vec![2, 1, 0]);
        assert_eq!(r.path_edges(1, 3), vec![1, 2]);
        assert_eq!(r.lca(2, 3), 2);
    }
}
