//! Min-bisection through spanning trees.
//!
//! Every tree edge carries the total capacity of graph edges crossing the cut
//! it induces. Cutting the tree along a balanced partition then costs at least
//! the true width of that partition in the graph, so an optimal tree bisection,
//! found by dynamic programming, is an upper bound on its own width. Drawing
//! the tree from a mapping of congestion δ makes the expected tree cost of the
//! optimal bisection at most δ times its width; the best tree in the support
//! is therefore within δ of optimal.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{invalid, Error, Result};
use crate::game::{
    build_congestion_game, congestion_oracle_from_stretch, distribution_from_solution, lp_minimax, mwu_solve,
    prune_support, Metric, MwuParams,
};
use crate::graph::{is_connected, DisjointSets, EdgeId, Graph, SpanningTree, VertexId};
use crate::mapping::{prob_congestion, tree_loads, ProbabilisticMapping};
use crate::oracle::{count_spanning_trees, enumerate_spanning_trees, ConfiguredOracle, OracleConfig};

/// Largest vertex count accepted by [`brute_force_bisection`].
pub const BRUTE_FORCE_LIMIT: usize = 16;

/// A balanced two-colouring of the vertices and its width in the graph.
#[derive(Debug, Clone, PartialEq)]
pub struct Bisection {
    pub side_of: Vec<u8>,
    pub width: f64,
}

impl Bisection {
    pub fn new(g: &Graph, side_of: Vec<u8>) -> Result<Self> {
        let width = induced_width(g, &side_of)?;
        Ok(Bisection { side_of, width })
    }
}

fn check_balanced(side_of: &[u8], n: usize) -> Result<()> {
    if side_of.len() != n {
        return Err(invalid!("expected {n} side labels, got {}", side_of.len()));
    }
    if side_of.iter().any(|&s| s > 1) {
        return Err(invalid!("side labels must be 0 or 1"));
    }
    let ones = side_of.iter().filter(|&&s| s == 1).count();
    if n % 2 == 1 || 2 * ones != n {
        return Err(invalid!("partition is not balanced: {ones} of {n} vertices on side 1"));
    }
    Ok(())
}

/// Total capacity of edges whose endpoints lie on different sides.
pub fn induced_width(g: &Graph, side_of: &[u8]) -> Result<f64> {
    check_balanced(side_of, g.n_vertices())?;
    Ok(g.edges().iter().filter(|e| side_of[e.u] != side_of[e.v]).map(|e| e.capacity).sum())
}

/// Load of every edge of a spanning tree.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeLoads {
    pub tree: SpanningTree,
    /// Aligned with `tree.edges()`.
    pub loads: Vec<f64>,
}

impl TreeLoads {
    pub fn load(&self, id: EdgeId) -> Option<f64> {
        self.tree.edges().binary_search(&id).ok().map(|k| self.loads[k])
    }

    /// Sum of loads over tree edges crossing the partition.
    pub fn cut_load(&self, g: &Graph, side_of: &[u8]) -> f64 {
        self.tree
            .edges()
            .iter()
            .zip(&self.loads)
            .filter(|(&id, _)| {
                let e = g.edge(id);
                side_of[e.u] != side_of[e.v]
            })
            .map(|(_, l)| l)
            .sum()
    }
}

/// For each tree edge, the capacity of graph edges joining the two components
/// of the tree without it.
pub fn compute_tree_loads(g: &Graph, t: &SpanningTree) -> Result<TreeLoads> {
    t.check_host(g)?;
    let all = tree_loads(g, t, &g.capacities());
    let loads = t.edges().iter().map(|&id| all[id]).collect();
    Ok(TreeLoads { tree: t.clone(), loads })
}

/// An optimal bisection of a weighted tree.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeBisection {
    /// Indices of the cut edges (into the edge list given to the solver, or
    /// graph edge ids for [`tree_bisection_dp`]).
    pub cut_edges: Vec<usize>,
    pub side_of: Vec<u8>,
    /// Sum of the cut edges' weights.
    pub tree_width: f64,
}

struct Merge {
    child: VertexId,
    edge: usize,
    /// For every count on the parent's side after the merge: (count before,
    /// count on the child's side within its subtree, edge cut).
    choice: Vec<(u32, u32, bool)>,
}

/// Minimum-weight balanced cut of a tree on `n` vertices given as `n − 1`
/// weighted edges.
///
/// `dp[v][k]` is the cheapest cut inside the subtree of `v` that puts exactly
/// `k` of its vertices on `v`'s side. Children are folded in one at a time;
/// keeping the edge adds the child's count to `v`'s, cutting it adds the
/// complement and the edge weight. Vertex 0 stays on side 0.
pub fn bisect_weighted_tree(n: usize, edges: &[(VertexId, VertexId, f64)]) -> Result<TreeBisection> {
    if n % 2 == 1 {
        return Err(Error::OddVertexCount(n));
    }
    if n == 0 {
        return Err(invalid!("cannot bisect an empty vertex set"));
    }
    if edges.len() != n - 1 {
        return Err(invalid!("a tree on {n} vertices has {} edges, got {}", n - 1, edges.len()));
    }
    let mut sets = DisjointSets::new(n);
    let mut adj = vec![Vec::new(); n];
    for (k, &(u, v, w)) in edges.iter().enumerate() {
        if u >= n || v >= n {
            return Err(invalid!("tree edge {k} has an endpoint out of range"));
        }
        if !(w >= 0.0) || !w.is_finite() {
            return Err(invalid!("tree edge {k} has weight {w}"));
        }
        if !sets.union(u, v) {
            return Err(invalid!("tree edges contain a cycle at edge {k}"));
        }
        adj[u].push((k, v));
        adj[v].push((k, u));
    }

    let mut order = Vec::with_capacity(n);
    let mut parent = vec![usize::MAX; n];
    let mut children: Vec<Vec<(usize, VertexId)>> = vec![Vec::new(); n];
    let mut stack = vec![0];
    parent[0] = 0;
    while let Some(x) = stack.pop() {
        order.push(x);
        for &(k, y) in &adj[x] {
            if parent[y] == usize::MAX {
                parent[y] = x;
                children[x].push((k, y));
                stack.push(y);
            }
        }
    }

    let mut dp: Vec<Vec<f64>> = vec![Vec::new(); n];
    let mut merges: Vec<Vec<Merge>> = (0..n).map(|_| Vec::new()).collect();
    for &v in order.iter().rev() {
        let mut cur = vec![f64::INFINITY, 0.0];
        for &(k, c) in &children[v] {
            let child = core::mem::take(&mut dp[c]);
            let (sv, sc) = (cur.len() - 1, child.len() - 1);
            let w = edges[k].2;
            let mut next = vec![f64::INFINITY; sv + sc + 1];
            let mut choice = vec![(0, 0, false); sv + sc + 1];
            for k1 in 1..=sv {
                let a = cur[k1];
                if a == f64::INFINITY {
                    continue;
                }
                for k2 in 1..=sc {
                    let b = child[k2];
                    if b == f64::INFINITY {
                        continue;
                    }
                    let kept = a + b;
                    if kept < next[k1 + k2] {
                        next[k1 + k2] = kept;
                        choice[k1 + k2] = (k1 as u32, k2 as u32, false);
                    }
                    let cut = a + b + w;
                    let idx = k1 + sc - k2;
                    if cut < next[idx] {
                        next[idx] = cut;
                        choice[idx] = (k1 as u32, k2 as u32, true);
                    }
                }
            }
            cur = next;
            merges[v].push(Merge { child: c, edge: k, choice });
        }
        dp[v] = cur;
    }

    let half = n / 2;
    if dp[0][half] == f64::INFINITY {
        return Err(Error::Numerical("tree dynamic program found no balanced cut".into()));
    }
    let mut side_of = vec![0u8; n];
    let mut cut_edges = Vec::new();
    let mut pending = vec![(0usize, 0u8, half)];
    while let Some((v, side, mut k)) = pending.pop() {
        side_of[v] = side;
        for m in merges[v].iter().rev() {
            let (k1, k2, cut) = m.choice[k];
            if cut {
                cut_edges.push(m.edge);
            }
            pending.push((m.child, side ^ cut as u8, k2 as usize));
            k = k1 as usize;
        }
        debug_assert_eq!(k, 1);
    }
    cut_edges.sort_unstable();
    let tree_width = cut_edges.iter().map(|&k| edges[k].2).sum();
    Ok(TreeBisection { cut_edges, side_of, tree_width })
}

/// Optimal bisection of the tree with respect to its loads. Cut edges are
/// reported as graph edge ids.
pub fn tree_bisection_dp(g: &Graph, loads: &TreeLoads) -> Result<TreeBisection> {
    loads.tree.check_host(g)?;
    if loads.loads.len() != loads.tree.edges().len() {
        return Err(invalid!("one load per tree edge expected"));
    }
    let edges: Vec<_> = loads
        .tree
        .edges()
        .iter()
        .zip(&loads.loads)
        .map(|(&id, &l)| {
            let e = g.edge(id);
            (e.u, e.v, l)
        })
        .collect();
    let mut out = bisect_weighted_tree(g.n_vertices(), &edges)?;
    for k in &mut out.cut_edges {
        *k = loads.tree.edges()[*k];
    }
    Ok(out)
}

/// Exhaustive minimum bisection; the first optimum in enumeration order of
/// the side-1 vertex sets (vertex 0 always on side 0).
pub fn brute_force_bisection(g: &Graph) -> Result<Bisection> {
    let n = g.n_vertices();
    if n % 2 == 1 {
        return Err(Error::OddVertexCount(n));
    }
    if n == 0 {
        return Err(invalid!("cannot bisect an empty vertex set"));
    }
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge { limit: BRUTE_FORCE_LIMIT, got: n });
    }
    let half = n / 2;
    let mut best: Option<Bisection> = None;
    let mut side_of = vec![0u8; n];
    for mask in 0u32..(1 << (n - 1)) {
        if mask.count_ones() as usize != half {
            continue;
        }
        for (v, s) in side_of.iter_mut().enumerate().skip(1) {
            *s = ((mask >> (v - 1)) & 1) as u8;
        }
        let width = induced_width(g, &side_of)?;
        if best.as_ref().is_none_or(|b| width < b.width) {
            best = Some(Bisection { side_of: side_of.clone(), width });
        }
    }
    best.ok_or_else(|| invalid!("no balanced partition"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMethod {
    /// LP when the trees fit under `lp_cap`, multiplicative weights otherwise.
    Auto,
    Lp,
    Mwu,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BisectionParams {
    pub method: SolveMethod,
    /// Largest spanning-tree count solved by LP.
    pub lp_cap: usize,
    pub mwu: MwuParams,
    pub oracle: OracleConfig,
    /// Re-optimize the multiplicative-weights support before the DP.
    pub prune: bool,
}

impl Default for BisectionParams {
    fn default() -> Self {
        BisectionParams {
            method: SolveMethod::Auto,
            lp_cap: 5000,
            mwu: MwuParams::default(),
            // past the LP cap, exact best responses are as costly as the LP
            oracle: OracleConfig { enumeration_cap: 5000, ..OracleConfig::default() },
            prune: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TreeResult {
    pub tree: SpanningTree,
    pub weight: f64,
    pub tree_width: f64,
    pub bisection: Bisection,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BisectionOutcome {
    pub best: Bisection,
    /// Position of the winning tree in `per_tree`.
    pub best_index: usize,
    pub per_tree: Vec<TreeResult>,
    pub distribution: ProbabilisticMapping,
    /// Overall congestion of `distribution`, recomputed exactly.
    pub certificate: f64,
    /// The method actually used.
    pub method: SolveMethod,
}

/// A low-congestion distribution over spanning trees of `g` under its own
/// capacities.
pub fn congestion_distribution(g: &Graph, params: &BisectionParams) -> Result<(ProbabilisticMapping, SolveMethod)> {
    if !is_connected(g) {
        return Err(Error::Disconnected);
    }
    let use_lp = match params.method {
        SolveMethod::Lp => true,
        SolveMethod::Mwu => false,
        SolveMethod::Auto => match count_spanning_trees(g, params.lp_cap) {
            Ok(_) => true,
            Err(Error::EnumerationOverflow { .. }) => false,
            Err(e) => return Err(e),
        },
    };
    if use_lp {
        let trees = enumerate_spanning_trees(g, params.lp_cap)?;
        let game = build_congestion_game(g, &trees)?;
        let solution = lp_minimax(game.payoffs())?;
        return Ok((distribution_from_solution(&game, &solution)?, SolveMethod::Lp));
    }
    let oracle = ConfiguredOracle::new(params.oracle.clone())?;
    let mut player = congestion_oracle_from_stretch(oracle, &g.capacities());
    let outcome = mwu_solve(g, &mut player, params.mwu)?;
    let pm =
        if params.prune { prune_support(&outcome.distribution, Metric::Congestion, g)? } else { outcome.distribution };
    Ok((pm, SolveMethod::Mwu))
}

/// Finds a low-congestion tree distribution, bisects every tree in its
/// support optimally, and keeps the bisection narrowest in `g`.
pub fn min_bisection_approx(g: &Graph, params: &BisectionParams) -> Result<BisectionOutcome> {
    let n = g.n_vertices();
    if n % 2 == 1 {
        return Err(Error::OddVertexCount(n));
    }
    let (distribution, method) = congestion_distribution(g, params)?;
    let certificate = prob_congestion(&distribution, g, &g.capacities())?.overall;
    let mut per_tree = Vec::with_capacity(distribution.len());
    let mut best_index = 0;
    for (t, w) in distribution.support() {
        let loads = compute_tree_loads(g, t)?;
        let cut = tree_bisection_dp(g, &loads)?;
        let bisection = Bisection::new(g, cut.side_of)?;
        if bisection.width < per_tree.get(best_index).map_or(f64::INFINITY, |r: &TreeResult| r.bisection.width) {
            best_index = per_tree.len();
        }
        per_tree.push(TreeResult { tree: t.clone(), weight: *w, tree_width: cut.tree_width, bisection });
    }
    Ok(BisectionOutcome {
        best: per_tree[best_index].bisection.clone(),
        best_index,
        per_tree,
        distribution,
        certificate,
        method,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mapping::canonical_mapping;

    fn path(n: usize) -> Graph {
        let pairs: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        Graph::unit(n, &pairs).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        let pairs: Vec<_> = (0..n).map(|v| (v, (v + 1) % n)).collect();
        Graph::unit(n, &pairs).unwrap()
    }

    #[test]
    fn tree_load_examples() {
        let g = path(3);
        let t = SpanningTree::new(&g, vec![0, 1]).unwrap();
        assert_eq!(compute_tree_loads(&g, &t).unwrap().loads, vec![1.0, 1.0]);

        let g = cycle(3);
        let t = SpanningTree::new(&g, vec![0, 1]).unwrap();
        assert_eq!(compute_tree_loads(&g, &t).unwrap().loads, vec![2.0, 2.0]);

        let g = cycle(4);
        let t = SpanningTree::new(&g, vec![0, 1, 2]).unwrap();
        let loads = compute_tree_loads(&g, &t).unwrap();
        assert_eq!(loads.loads, vec![2.0; 3]);
        assert_eq!(loads.load(3), None);
        let m = canonical_mapping(&g, &t).unwrap();
        for (&id, &l) in t.edges().iter().zip(&loads.loads) {
            assert_eq!(m.load_of_edge(&g.capacities(), id), l);
        }
    }

    #[test]
    fn tree_dp_examples() {
        let out = bisect_weighted_tree(4, &[(0, 1, 1.0), (1, 2, 5.0), (2, 3, 1.0)]).unwrap();
        assert_eq!(out.cut_edges, vec![0, 2]);
        assert_eq!(out.tree_width, 2.0);
        assert_eq!(out.side_of, vec![0, 1, 1, 0]);

        let star = bisect_weighted_tree(4, &[(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0)]).unwrap();
        assert_eq!(star.tree_width, 2.0);

        let pair = bisect_weighted_tree(2, &[(0, 1, 3.0)]).unwrap();
        assert_eq!(pair.tree_width, 3.0);
        assert_eq!(pair.side_of, vec![0, 1]);

        assert_eq!(bisect_weighted_tree(3, &[(0, 1, 1.0), (1, 2, 1.0)]), Err(Error::OddVertexCount(3)));
        assert!(bisect_weighted_tree(4, &[(0, 1, 1.0), (1, 0, 1.0), (2, 3, 1.0)]).is_err());
    }

    #[test]
    fn induced_width_examples() {
        let g = cycle(4);
        assert!(induced_width(&g, &[0, 0, 0, 0]).is_err());
        assert_eq!(induced_width(&g, &[0, 0, 1, 1]).unwrap(), 2.0);
        assert_eq!(induced_width(&g, &[0, 1, 0, 1]).unwrap(), 4.0);
        assert_eq!(induced_width(&path(2), &[0, 1]).unwrap(), 1.0);
    }

    #[test]
    fn brute_force_examples() {
        assert_eq!(brute_force_bisection(&path(2)).unwrap().width, 1.0);
        assert_eq!(brute_force_bisection(&cycle(4)).unwrap().width, 2.0);
        assert_eq!(brute_force_bisection(&cycle(8)).unwrap().width, 2.0);
        assert!(matches!(brute_force_bisection(&cycle(18)), Err(Error::TooLarge { .. })));
    }

    fn two_triangles() -> Graph {
        Graph::unit(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 3)]).unwrap()
    }

    #[test]
    fn end_to_end_examples() {
        let params = BisectionParams::default();
        let out = min_bisection_approx(&two_triangles(), &params).unwrap();
        assert_eq!(out.best.width, 1.0);
        assert_eq!(out.method, SolveMethod::Lp);
        assert_eq!(min_bisection_approx(&cycle(4), &params).unwrap().best.width, 2.0);
        let k4 = Graph::unit(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(min_bisection_approx(&k4, &params).unwrap().best.width, 4.0);
        assert_eq!(min_bisection_approx(&cycle(5), &params), Err(Error::OddVertexCount(5)));

        let mwu = BisectionParams { method: SolveMethod::Mwu, prune: true, ..params };
        let out = min_bisection_approx(&two_triangles(), &mwu).unwrap();
        assert_eq!(out.method, SolveMethod::Mwu);
        assert!(out.best.width <= out.certificate * 1.0 + 1e-9);
    }
}
