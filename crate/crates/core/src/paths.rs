//! The graph of `k` disjoint `s`–`t` paths of `k` edges each, plus the edge
//! `(s, t)`, with `n = k²` path edges.
//!
//! It has a mapping of stretch at most 3 and one of congestion at most 3 for
//! any weights, yet with unit weights every distribution over its spanning
//! trees has stretch or congestion at least `k/2`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{invalid, Error, Result};
use crate::graph::{Edge, EdgeId, Graph, SpanningTree, VertexId};
use crate::mapping::{MetricProfile, ProbabilisticMapping};
use crate::oracle::enumerate_spanning_trees;
use crate::planar::RotationSystem;

#[derive(Debug, Clone, PartialEq)]
pub struct PathsGraph {
    pub graph: Graph,
    pub k: usize,
    pub s: VertexId,
    pub t: VertexId,
    /// Edge ids of every path in order from `s` to `t`.
    pub paths: Vec<Vec<EdgeId>>,
    /// The edge `(s, t)`, id `k²`.
    pub st_edge: EdgeId,
}

impl PathsGraph {
    /// Unit lengths and capacities. `s = 0`, `t = 1`, path `p` uses edges
    /// `p·k .. p·k + k − 1`.
    pub fn new(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(invalid!("need at least one path"));
        }
        let inner = |p: usize, i: usize| 2 + p * (k - 1) + i;
        let mut edges = Vec::with_capacity(k * k + 1);
        let mut paths = Vec::with_capacity(k);
        for p in 0..k {
            let mut path = Vec::with_capacity(k);
            for i in 0..k {
                let a = if i == 0 { 0 } else { inner(p, i - 1) };
                let b = if i + 1 == k { 1 } else { inner(p, i) };
                path.push(edges.len());
                edges.push(Edge::unit(a, b));
            }
            paths.push(path);
        }
        let st_edge = edges.len();
        edges.push(Edge::unit(0, 1));
        let graph = Graph::new(2 + k * (k - 1), edges)?;
        Ok(PathsGraph { graph, k, s: 0, t: 1, paths, st_edge })
    }

    /// Square `n` only.
    pub fn with_path_edges(n: usize) -> Result<Self> {
        let k = libm::sqrt(n as f64) as usize;
        let k = (k.saturating_sub(1)..=k + 1).find(|&r| r * r == n);
        match k {
            Some(k) if k > 0 => Self::new(k),
            _ => Err(invalid!("n = {n} is not a positive perfect square")),
        }
    }

    pub fn with_weights(&self, lengths: &[f64], capacities: &[f64]) -> Result<Self> {
        let graph = self.graph.with_lengths(lengths)?.with_capacities(capacities)?;
        Ok(PathsGraph { graph, ..self.clone() })
    }

    /// Paths nested around `s` in index order, with `(s, t)` outermost.
    pub fn rotation(&self) -> Result<RotationSystem> {
        let g = &self.graph;
        let mut rot: Vec<Vec<(EdgeId, u8)>> = vec![Vec::new(); g.n_vertices()];
        for (id, e) in g.edges().iter().enumerate() {
            if e.u != self.s {
                rot[e.u].push((id, 0));
            }
            if e.v != self.t {
                rot[e.v].push((id, 1));
            }
        }
        let firsts = self.paths.iter().map(|p| p[0]).chain([self.st_edge]);
        rot[self.s] = firsts.map(|id| (id, 0)).collect();
        let lasts = self.paths.iter().map(|p| p[self.k - 1]).chain([self.st_edge]);
        rot[self.t] = lasts.map(|id| (id, 1)).rev().collect();
        RotationSystem::new(g, rot)
    }

    fn path_length(&self, path: &[EdgeId]) -> f64 {
        path.iter().map(|&id| self.graph.edge(id).length).sum()
    }

    /// The shortest `s`–`t` path: `(s, t)` itself (`None`) or a path index.
    /// Ties go to `(s, t)`, then to the lowest index.
    pub fn shortest_path(&self) -> Option<usize> {
        let mut best = (self.graph.edge(self.st_edge).length, None);
        for (p, path) in self.paths.iter().enumerate() {
            let l = self.path_length(path);
            if l < best.0 {
                best = (l, Some(p));
            }
        }
        best.1
    }

    /// Keeps the shortest path `P` whole and drops one edge from every other
    /// path, chosen with probability proportional to its length. Returns the
    /// expected stretch of every edge in closed form: an edge of length `ℓ` on
    /// a path of length `L` survives with probability `(L − ℓ)/L`, and
    /// otherwise is routed along the rest of its path and `P`.
    pub fn stretch_construction_profile(&self) -> MetricProfile {
        let g = &self.graph;
        let shortest = self.shortest_path();
        let p_len = match shortest {
            None => g.edge(self.st_edge).length,
            Some(p) => self.path_length(&self.paths[p]),
        };
        let mut per_edge = vec![1.0; g.n_edges()];
        let mut others: Vec<&[EdgeId]> = Vec::with_capacity(self.k + 1);
        for (p, path) in self.paths.iter().enumerate() {
            if shortest != Some(p) {
                others.push(path);
            }
        }
        let st = [self.st_edge];
        if shortest.is_some() {
            others.push(&st);
        }
        for path in others {
            let total = self.path_length(path);
            for &id in path {
                let l = g.edge(id).length;
                per_edge[id] = (total - l) / total + (total - l + p_len) / total;
            }
        }
        MetricProfile::from_per_edge(per_edge)
    }

    /// The same construction with its support listed: one tree per choice of
    /// dropped edges. Refuses supports larger than `limit`.
    pub fn stretch_construction(&self, limit: usize) -> Result<ProbabilisticMapping> {
        let g = &self.graph;
        let shortest = self.shortest_path();
        let mut others: Vec<Vec<EdgeId>> = Vec::new();
        for (p, path) in self.paths.iter().enumerate() {
            if shortest != Some(p) {
                others.push(path.clone());
            }
        }
        if shortest.is_some() {
            others.push(vec![self.st_edge]);
        }
        let size = others.iter().fold(1usize, |acc, p| acc.saturating_mul(p.len()));
        if size > limit {
            return Err(Error::TooLarge { limit, got: size });
        }
        let mut support = Vec::with_capacity(size);
        let mut choice = vec![0usize; others.len()];
        loop {
            let mut weight = 1.0;
            let mut dropped = Vec::with_capacity(others.len());
            for (path, &c) in others.iter().zip(&choice) {
                let total = self.path_length(path);
                weight *= g.edge(path[c]).length / total;
                dropped.push(path[c]);
            }
            dropped.sort_unstable();
            let kept = (0..g.n_edges()).filter(|id| dropped.binary_search(id).is_err()).collect();
            support.push((SpanningTree::new(g, kept)?, weight));
            // odometer over the choices, last path fastest
            let mut i = others.len();
            loop {
                if i == 0 {
                    return ProbabilisticMapping::normalized(support);
                }
                i -= 1;
                choice[i] += 1;
                if choice[i] < others[i].len() {
                    break;
                }
                choice[i] = 0;
            }
        }
    }

    /// Treats `(s, t)` as one more path and finds the minimum-capacity edge
    /// `e_j` of every path; each tree keeps all other edges and exactly one
    /// `e_j`, chosen with probability proportional to its capacity.
    pub fn congestion_construction(&self) -> Result<ProbabilisticMapping> {
        let g = &self.graph;
        let mut mins = Vec::with_capacity(self.k + 1);
        let st = [self.st_edge];
        for path in self.paths.iter().map(Vec::as_slice).chain([&st[..]]) {
            let mut best = path[0];
            for &id in path {
                if g.edge(id).capacity < g.edge(best).capacity {
                    best = id;
                }
            }
            mins.push(best);
        }
        let support = mins
            .iter()
            .map(|&keep| {
                let edges = (0..g.n_edges()).filter(|id| *id == keep || !mins.contains(id)).collect();
                Ok((SpanningTree::new(g, edges)?, g.edge(keep).capacity))
            })
            .collect::<Result<Vec<_>>>()?;
        ProbabilisticMapping::normalized(support)
    }

    /// Number of spanning trees containing `(s, t)`, and the total.
    pub fn st_membership(&self, cap: usize) -> Result<(usize, usize)> {
        let trees = enumerate_spanning_trees(&self.graph, cap)?;
        let with = trees.iter().filter(|t| t.contains(self.st_edge)).count();
        Ok((with, trees.len()))
    }
}
