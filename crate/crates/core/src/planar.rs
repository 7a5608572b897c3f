//! Planar embeddings, dual graphs, and the stretch/congestion duality.
//!
//! An embedding is given combinatorially: every vertex lists its incident
//! edge-ends in cyclic order. End 0 of an edge sits at `u`, end 1 at `v`. A
//! dart `(e, s)` leaves edge `e` from end `s`. Faces are traced by arriving at
//! a vertex through an edge-end and leaving along the next end in that
//! vertex's cyclic order.
//!
//! The dual has one vertex per face and one edge `e*` per primal edge,
//! joining the faces on either side of `e`; `e*` keeps the id of `e`, takes
//! the length of `e` as its capacity and the capacity of `e` as its length.
//! For a spanning tree `T` the edges outside `T` form a spanning tree of the
//! dual, and the fundamental cycle of a non-tree edge `e` crosses exactly the
//! dual edges whose dual path runs through `e*`. Hence the dual congestion of
//! `e*` is the stretch of `e` plus one, and symmetrically for tree edges.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{invalid, Error, Result};
use crate::graph::{is_connected, Edge, EdgeId, Graph, SpanningTree, VertexId};
use crate::mapping::{prob_congestion, prob_stretch, tree_congestions, tree_stretches, ProbabilisticMapping};

/// One end of an edge: `(edge, 0)` at `u`, `(edge, 1)` at `v`.
pub type EdgeEnd = (EdgeId, u8);

fn endpoint(e: &Edge, s: u8) -> VertexId {
    if s == 0 {
        e.u
    } else {
        e.v
    }
}

/// Cyclic order of edge-ends around every vertex of a connected graph,
/// validated to describe a planar embedding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RotationSystem {
    n_edges: usize,
    rot: Vec<Vec<EdgeEnd>>,
    /// Position of every end in its vertex's list.
    pos: Vec<[usize; 2]>,
}

impl RotationSystem {
    pub fn new(g: &Graph, rot: Vec<Vec<EdgeEnd>>) -> Result<Self> {
        if rot.len() != g.n_vertices() {
            return Err(Error::Rotation(format!("{} vertices but {} rotation lists", g.n_vertices(), rot.len())));
        }
        let m = g.n_edges();
        let mut pos = vec![[usize::MAX; 2]; m];
        for (v, ends) in rot.iter().enumerate() {
            for (k, &(e, s)) in ends.iter().enumerate() {
                if e >= m || s > 1 {
                    return Err(Error::Rotation(format!("vertex {v} lists unknown edge-end {e}:{s}")));
                }
                if endpoint(g.edge(e), s) != v {
                    return Err(Error::Rotation(format!("edge-end {e}:{s} does not sit at vertex {v}")));
                }
                if pos[e][s as usize] != usize::MAX {
                    return Err(Error::Rotation(format!("edge-end {e}:{s} listed twice")));
                }
                pos[e][s as usize] = k;
            }
        }
        if let Some(e) = pos.iter().position(|p| p.contains(&usize::MAX)) {
            return Err(Error::Rotation(format!("edge {e} is missing an end")));
        }
        if !is_connected(g) {
            return Err(Error::Disconnected);
        }
        let out = RotationSystem { n_edges: m, rot, pos };
        let faces = out.trace(g);
        let chi = g.n_vertices() as isize - m as isize + faces.walks.len() as isize;
        if chi != 2 {
            return Err(Error::Rotation(format!(
                "V - E + F = {chi}, not 2: the rotation does not describe a planar embedding"
            )));
        }
        Ok(out)
    }

    /// Sorts the ends at every vertex counter-clockwise by the direction to
    /// the neighbour, for straight-line drawings without parallel edges.
    pub fn from_positions(g: &Graph, positions: &[(f64, f64)]) -> Result<Self> {
        if positions.len() != g.n_vertices() {
            return Err(invalid!("{} positions for {} vertices", positions.len(), g.n_vertices()));
        }
        let mut rot: Vec<Vec<(f64, EdgeEnd)>> = vec![Vec::new(); g.n_vertices()];
        for (id, e) in g.edges().iter().enumerate() {
            for s in 0..2u8 {
                let here = positions[endpoint(e, s)];
                let there = positions[endpoint(e, 1 - s)];
                let angle = libm::atan2(there.1 - here.1, there.0 - here.0);
                rot[endpoint(e, s)].push((angle, (id, s)));
            }
        }
        let mut out = Vec::with_capacity(rot.len());
        for (v, mut ends) in rot.into_iter().enumerate() {
            ends.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            if ends.windows(2).any(|w| w[0].0 == w[1].0) {
                return Err(Error::Rotation(format!("two edges leave vertex {v} in the same direction")));
            }
            out.push(ends.into_iter().map(|(_, end)| end).collect());
        }
        Self::new(g, out)
    }

    pub fn at(&self, v: VertexId) -> &[EdgeEnd] {
        &self.rot[v]
    }

    pub fn lists(&self) -> &[Vec<EdgeEnd>] {
        &self.rot
    }

    fn fits(&self, g: &Graph) -> Result<()> {
        if self.rot.len() != g.n_vertices() || self.n_edges != g.n_edges() {
            return Err(Error::Rotation("rotation system belongs to a different graph".into()));
        }
        Ok(())
    }

    fn next_after(&self, v: VertexId, end: EdgeEnd) -> EdgeEnd {
        let list = &self.rot[v];
        list[(self.pos[end.0][end.1 as usize] + 1) % list.len()]
    }

    fn trace(&self, g: &Graph) -> Faces {
        let m = g.n_edges();
        let mut face_of = vec![[usize::MAX; 2]; m];
        let mut walks = Vec::new();
        for e in 0..m {
            for s in 0..2u8 {
                if face_of[e][s as usize] != usize::MAX {
                    continue;
                }
                let f = walks.len();
                let mut walk = Vec::new();
                let mut dart = (e, s);
                while face_of[dart.0][dart.1 as usize] == usize::MAX {
                    face_of[dart.0][dart.1 as usize] = f;
                    walk.push(dart);
                    let arrival = (dart.0, 1 - dart.1);
                    dart = self.next_after(endpoint(g.edge(dart.0), arrival.1), arrival);
                }
                walks.push(walk);
            }
        }
        Faces { walks, face_of }
    }
}

/// Faces of an embedding as closed walks of darts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Faces {
    pub walks: Vec<Vec<EdgeEnd>>,
    /// `face_of[e][s]`: the face whose walk contains dart `(e, s)`.
    pub face_of: Vec<[usize; 2]>,
}

impl Faces {
    pub fn len(&self) -> usize {
        self.walks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.walks.is_empty()
    }
}

/// Traces every face; each dart lies on exactly one walk.
pub fn trace_faces(g: &Graph, rot: &RotationSystem) -> Result<Faces> {
    rot.fits(g)?;
    Ok(rot.trace(g))
}

/// The dual graph, sharing edge ids with the primal.
#[derive(Debug, Clone, PartialEq)]
pub struct DualGraph {
    pub graph: Graph,
    pub faces: Faces,
    /// The embedding of the dual inherited from the face walks.
    pub rotation: RotationSystem,
}

/// Builds the dual of a bridgeless embedded graph.
pub fn build_dual(g: &Graph, rot: &RotationSystem) -> Result<DualGraph> {
    let faces = trace_faces(g, rot)?;
    let mut edges = Vec::with_capacity(g.n_edges());
    for (id, e) in g.edges().iter().enumerate() {
        let [a, b] = faces.face_of[id];
        if a == b {
            return Err(Error::CutEdge(id));
        }
        edges.push(Edge::new(a, b, e.capacity, e.length));
    }
    let graph = Graph::new(faces.len(), edges)?;
    // end s of e* sits on face_of[e][s], the face walking dart (e, s)
    let rotation = RotationSystem::new(&graph, faces.walks.clone())?;
    Ok(DualGraph { graph, faces, rotation })
}

/// The dual images of the edges outside `t`, which span the dual.
pub fn dual_spanning_tree(g: &Graph, dual: &DualGraph, t: &SpanningTree) -> Result<SpanningTree> {
    t.check_host(g)?;
    SpanningTree::new(&dual.graph, t.complement())
        .map_err(|e| Error::Numerical(format!("complement of a spanning tree is not a dual spanning tree: {e}")))
}

/// Whether the dual of the dual is the primal graph again: its faces must
/// carry exactly the edge sets incident to the primal vertices.
pub fn dual_is_involutive(g: &Graph, dual: &DualGraph) -> Result<bool> {
    let back = build_dual(&dual.graph, &dual.rotation)?;
    if back.graph.n_vertices() != g.n_vertices() {
        return Ok(false);
    }
    let mut primal: Vec<Vec<EdgeId>> = vec![Vec::new(); g.n_vertices()];
    for (id, e) in g.edges().iter().enumerate() {
        primal[e.u].push(id);
        primal[e.v].push(id);
    }
    let mut faces: Vec<Vec<EdgeId>> = back.faces.walks.iter().map(|w| w.iter().map(|d| d.0).collect()).collect();
    for list in primal.iter_mut().chain(faces.iter_mut()) {
        list.sort_unstable();
    }
    primal.sort();
    faces.sort();
    let weights_kept =
        back.graph.edges().iter().zip(g.edges()).all(|(a, b)| a.length == b.length && a.capacity == b.capacity);
    Ok(primal == faces && weights_kept)
}

fn same(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * b.abs().max(1.0)
}

/// Stretch and congestion of one edge under `t`, next to the dual values of
/// its image under the dual tree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeDuality {
    pub edge: EdgeId,
    pub in_tree: bool,
    pub stretch: f64,
    pub dual_congestion: f64,
    pub congestion: f64,
    pub dual_stretch: f64,
}

impl EdgeDuality {
    /// Non-tree edges: dual congestion = stretch + 1 and dual stretch 1 with
    /// congestion 0. Tree edges: stretch 1, dual congestion 0, and congestion
    /// = dual stretch + 1.
    pub fn holds(&self) -> bool {
        if self.in_tree {
            self.stretch == 1.0 && self.dual_congestion == 0.0 && same(self.congestion, self.dual_stretch + 1.0)
        } else {
            same(self.dual_congestion, self.stretch + 1.0) && self.dual_stretch == 1.0 && self.congestion == 0.0
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DualityReport {
    pub dual_tree: SpanningTree,
    pub edges: Vec<EdgeDuality>,
    pub violations: Vec<EdgeId>,
}

impl DualityReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Compares every edge's stretch and congestion under `t` with the dual
/// values under the complementary dual tree.
pub fn check_duality(g: &Graph, dual: &DualGraph, t: &SpanningTree) -> Result<DualityReport> {
    let dual_tree = dual_spanning_tree(g, dual, t)?;
    let stretch = tree_stretches(g, t, &g.lengths());
    let congestion = tree_congestions(g, t, &g.capacities());
    let dual_stretch = tree_stretches(&dual.graph, &dual_tree, &dual.graph.lengths());
    let dual_congestion = tree_congestions(&dual.graph, &dual_tree, &dual.graph.capacities());
    let edges: Vec<EdgeDuality> = (0..g.n_edges())
        .map(|id| EdgeDuality {
            edge: id,
            in_tree: t.contains(id),
            stretch: stretch[id],
            dual_congestion: dual_congestion[id],
            congestion: congestion[id],
            dual_stretch: dual_stretch[id],
        })
        .collect();
    let violations = edges.iter().filter(|d| !d.holds()).map(|d| d.edge).collect();
    Ok(DualityReport { dual_tree, edges, violations })
}

/// Overall metrics of a distribution and of its transport to the dual.
#[derive(Debug, Clone, PartialEq)]
pub struct CorollaryReport {
    pub primal_stretch: f64,
    pub dual_congestion: f64,
    pub primal_congestion: f64,
    pub dual_stretch: f64,
}

impl CorollaryReport {
    /// Dual congestion ≤ primal stretch + 1 and dual stretch ≤ primal
    /// congestion + 1, up to 1e-9.
    pub fn holds(&self) -> bool {
        self.dual_congestion <= self.primal_stretch + 1.0 + 1e-9
            && self.dual_stretch <= self.primal_congestion + 1.0 + 1e-9
    }
}

/// Replaces every tree by its dual tree, keeping the probabilities.
pub fn transport_to_dual(g: &Graph, dual: &DualGraph, pm: &ProbabilisticMapping) -> Result<ProbabilisticMapping> {
    let support =
        pm.support().iter().map(|(t, w)| Ok((dual_spanning_tree(g, dual, t)?, *w))).collect::<Result<Vec<_>>>()?;
    ProbabilisticMapping::new(support)
}

pub fn check_corollary(g: &Graph, dual: &DualGraph, pm: &ProbabilisticMapping) -> Result<CorollaryReport> {
    let transported = transport_to_dual(g, dual, pm)?;
    Ok(CorollaryReport {
        primal_stretch: prob_stretch(pm, g, &g.lengths())?.overall,
        dual_congestion: prob_congestion(&transported, &dual.graph, &dual.graph.capacities())?.overall,
        primal_congestion: prob_congestion(pm, g, &g.capacities())?.overall,
        dual_stretch: prob_stretch(&transported, &dual.graph, &dual.graph.lengths())?.overall,
    })
}
