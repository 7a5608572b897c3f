//! Small named graphs, with planar embeddings where they have one.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use rand::Rng;

use crate::error::{invalid, Result};
use crate::graph::{Edge, EdgeId, Graph, VertexId};
use crate::paths::PathsGraph;
use crate::planar::RotationSystem;

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddedGraph {
    pub name: String,
    pub graph: Graph,
    pub rotation: RotationSystem,
}

fn on_circle(n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|i| {
            let a = TAU * i as f64 / n as f64;
            (libm::cos(a), libm::sin(a))
        })
        .collect()
}

/// Cycle `0, 1, …, n−1` drawn on a circle, with extra chords that must not
/// cross.
pub fn cycle_with_chords(n: usize, chords: &[(VertexId, VertexId)]) -> Result<EmbeddedGraph> {
    if n < 3 {
        return Err(invalid!("a drawn cycle needs at least 3 vertices"));
    }
    let mut pairs: Vec<_> = (0..n).map(|v| (v, (v + 1) % n)).collect();
    pairs.extend_from_slice(chords);
    let graph = Graph::unit(n, &pairs)?;
    let rotation = RotationSystem::from_positions(&graph, &on_circle(n))?;
    let name = if chords.is_empty() { format!("cycle{n}") } else { format!("cycle{n}+{}chords", chords.len()) };
    Ok(EmbeddedGraph { name, graph, rotation })
}

pub fn cycle(n: usize) -> Result<EmbeddedGraph> {
    cycle_with_chords(n, &[])
}

/// Internally disjoint paths between `s = 0` and `t = 1` with the given edge
/// counts, nested in order. Two or more one-edge paths are parallel edges.
pub fn parallel_paths(lengths: &[usize]) -> Result<EmbeddedGraph> {
    if lengths.len() < 2 || lengths.contains(&0) {
        return Err(invalid!("need at least two paths of positive length"));
    }
    let mut edges = Vec::new();
    let mut firsts = Vec::new();
    let mut lasts = Vec::new();
    let mut next_vertex = 2;
    for &len in lengths {
        let mut prev = 0;
        for i in 0..len {
            let here = if i + 1 == len {
                1
            } else {
                next_vertex += 1;
                next_vertex - 1
            };
            if i == 0 {
                firsts.push(edges.len());
            }
            if i + 1 == len {
                lasts.push(edges.len());
            }
            edges.push(Edge::unit(prev, here));
            prev = here;
        }
    }
    let graph = Graph::new(next_vertex, edges)?;
    let mut rot: Vec<Vec<(EdgeId, u8)>> = vec![Vec::new(); next_vertex];
    for (id, e) in graph.edges().iter().enumerate() {
        if e.u != 0 {
            rot[e.u].push((id, 0));
        }
        if e.v != 1 {
            rot[e.v].push((id, 1));
        }
    }
    rot[0] = firsts.iter().map(|&id| (id, 0)).collect();
    rot[1] = lasts.iter().rev().map(|&id| (id, 1)).collect();
    let rotation = RotationSystem::new(&graph, rot)?;
    let name = format!("paths{lengths:?}").replace(' ', "");
    Ok(EmbeddedGraph { name, graph, rotation })
}

/// Hub 0 joined to a rim cycle `1..=spokes`; rim edges first, then spokes.
pub fn wheel(spokes: usize) -> Result<EmbeddedGraph> {
    if spokes < 3 {
        return Err(invalid!("a wheel needs at least 3 spokes"));
    }
    let mut pairs: Vec<_> = (0..spokes).map(|i| (1 + i, 1 + (i + 1) % spokes)).collect();
    pairs.extend((1..=spokes).map(|v| (0, v)));
    let graph = Graph::unit(spokes + 1, &pairs)?;
    let mut positions = vec![(0.0, 0.0)];
    positions.extend(on_circle(spokes));
    let rotation = RotationSystem::from_positions(&graph, &positions)?;
    Ok(EmbeddedGraph { name: format!("wheel{spokes}"), graph, rotation })
}

/// `rows × cols` grid, vertex `r·cols + c`; horizontal edges first.
pub fn grid(rows: usize, cols: usize) -> Result<EmbeddedGraph> {
    let mut pairs = Vec::new();
    for r in 0..rows {
        for c in 0..cols.saturating_sub(1) {
            pairs.push((r * cols + c, r * cols + c + 1));
        }
    }
    for r in 0..rows.saturating_sub(1) {
        for c in 0..cols {
            pairs.push((r * cols + c, (r + 1) * cols + c));
        }
    }
    let graph = Graph::unit(rows * cols, &pairs)?;
    let positions: Vec<_> = (0..rows * cols).map(|v| ((v % cols) as f64, (v / cols) as f64)).collect();
    let rotation = RotationSystem::from_positions(&graph, &positions)?;
    Ok(EmbeddedGraph { name: format!("grid{rows}x{cols}"), graph, rotation })
}

pub fn paths_graph(k: usize) -> Result<EmbeddedGraph> {
    let pg = PathsGraph::new(k)?;
    let rotation = pg.rotation()?;
    Ok(EmbeddedGraph { name: format!("sqrt-paths{}", k * k), graph: pg.graph, rotation })
}

/// Bridgeless planar graphs with hand-checked embeddings.
pub fn embedded_family() -> Result<Vec<EmbeddedGraph>> {
    let mut out = Vec::new();
    for n in 3..=8 {
        out.push(cycle(n)?);
    }
    out.push(cycle_with_chords(6, &[(0, 2), (0, 3), (3, 5)])?);
    out.push(cycle_with_chords(8, &[(0, 4), (1, 3), (5, 7)])?);
    for lengths in [&[1, 1][..], &[1, 1, 1], &[1, 2, 2], &[2, 2, 2], &[1, 2, 3], &[2, 3, 3], &[3, 3, 3]] {
        out.push(parallel_paths(lengths)?);
    }
    for spokes in 3..=8 {
        out.push(wheel(spokes)?);
    }
    out.push(grid(3, 3)?);
    for k in 2..=4 {
        out.push(paths_graph(k)?);
    }
    Ok(out)
}

pub fn complete(n: usize) -> Result<Graph> {
    let mut pairs = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            pairs.push((a, b));
        }
    }
    Graph::unit(n, &pairs)
}

pub fn complete_bipartite(a: usize, b: usize) -> Result<Graph> {
    let mut pairs = Vec::new();
    for x in 0..a {
        for y in 0..b {
            pairs.push((x, a + y));
        }
    }
    Graph::unit(a + b, &pairs)
}

pub fn petersen() -> Result<Graph> {
    let mut pairs = Vec::new();
    for i in 0..5 {
        pairs.push((i, (i + 1) % 5));
        pairs.push((i, i + 5));
        pairs.push((5 + i, 5 + (i + 2) % 5));
    }
    Graph::unit(10, &pairs)
}

/// Unit-weight graphs with at most a few thousand spanning trees: the
/// embedded family plus some non-planar and irregular graphs.
pub fn small_family() -> Result<Vec<(String, Graph)>> {
    let mut out: Vec<(String, Graph)> = embedded_family()?.into_iter().map(|e| (e.name, e.graph)).collect();
    out.push(("path4".into(), Graph::unit(4, &[(0, 1), (1, 2), (2, 3)])?));
    out.push(("diamond".into(), Graph::unit(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)])?));
    out.push(("two-triangles".into(), Graph::unit(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 3)])?));
    out.push(("K5".into(), complete(5)?));
    out.push(("K2,3".into(), complete_bipartite(2, 3)?));
    out.push(("K3,3".into(), complete_bipartite(3, 3)?));
    out.push(("petersen".into(), petersen()?));
    Ok(out)
}

/// A random spanning tree on `n` vertices (each vertex attaches to a random
/// earlier one) plus `extra` random non-loop edges, with unit weights.
pub fn random_connected<R: Rng + ?Sized>(n: usize, extra: usize, rng: &mut R) -> Result<Graph> {
    if n < 2 {
        return Err(invalid!("need at least two vertices"));
    }
    let mut pairs = Vec::with_capacity(n - 1 + extra);
    for v in 1..n {
        pairs.push((rng.gen_range(0..v), v));
    }
    for _ in 0..extra {
        let a = rng.gen_range(0..n);
        let mut b = rng.gen_range(0..n - 1);
        if b >= a {
            b += 1;
        }
        pairs.push((a, b));
    }
    Graph::unit(n, &pairs)
}
