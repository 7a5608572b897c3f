//! Spanning-tree enumeration and δ-response oracles for the stretch game.
//!
//! Given a mixed strategy `α` of the edge player, a stretch oracle returns a
//! spanning tree together with the normalized objective `Σ α_i·stretch(i) / Σ α`
//! it actually achieves. The exact oracle scans every spanning tree; the
//! heuristic one scores a small candidate set. Either way the reported value is
//! recomputed from the returned tree, never estimated.

use alloc::vec::Vec;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Error, Result};
use crate::graph::{
    check_len, check_positive_weights, is_connected, minimum_spanning_tree, shortest_path_tree, DisjointSets, EdgeId,
    Graph, SpanningTree,
};
use crate::mapping::tree_stretches;

/// Default bound on the number of spanning trees the exact oracle will scan.
pub const DEFAULT_ENUMERATION_CAP: usize = 1_000_000;

/// Natural log of the number of spanning trees (matrix-tree theorem).
///
/// Returns `-inf` for disconnected graphs. Floating point: use it to decide
/// orders of magnitude, not to count exactly.
pub fn log_spanning_tree_count(g: &Graph) -> f64 {
    let n = g.n_vertices();
    if n <= 1 {
        return 0.0;
    }
    if !is_connected(g) {
        return f64::NEG_INFINITY;
    }
    // reduced Laplacian: drop vertex 0
    let k = n - 1;
    let mut lap = alloc::vec![0.0f64; k * k];
    for e in g.edges() {
        for (a, b) in [(e.u, e.v), (e.v, e.u)] {
            if a > 0 {
                lap[(a - 1) * k + (a - 1)] += 1.0;
                if b > 0 {
                    lap[(a - 1) * k + (b - 1)] -= 1.0;
                }
            }
        }
    }
    let mut log_det = 0.0;
    for col in 0..k {
        let pivot_row = (col..k).max_by(|&a, &b| lap[a * k + col].abs().total_cmp(&lap[b * k + col].abs())).unwrap();
        let pivot = lap[pivot_row * k + col];
        if pivot.abs() < 1e-12 {
            return f64::NEG_INFINITY;
        }
        if pivot_row != col {
            for j in 0..k {
                lap.swap(pivot_row * k + j, col * k + j);
            }
        }
        log_det += libm::log(pivot.abs());
        for r in col + 1..k {
            let factor = lap[r * k + col] / pivot;
            if factor != 0.0 {
                for j in col..k {
                    lap[r * k + j] -= factor * lap[col * k + j];
                }
            }
        }
    }
    log_det
}

/// Visits every spanning tree by contraction/deletion on edges in id order,
/// trying "include" before "exclude". Stops with an overflow error as soon as
/// more than `cap` trees have been seen.
fn for_each_spanning_tree(g: &Graph, cap: usize, visit: &mut dyn FnMut(&[EdgeId])) -> Result<usize> {
    if !is_connected(g) {
        return Err(Error::Disconnected);
    }
    struct Walk<'a> {
        g: &'a Graph,
        cap: usize,
        count: usize,
        chosen: Vec<EdgeId>,
        visit: &'a mut dyn FnMut(&[EdgeId]),
    }

    impl Walk<'_> {
        fn still_connectable(&self, sets: &DisjointSets, from: usize) -> bool {
            let mut sets = sets.clone();
            for e in &self.g.edges()[from..] {
                sets.union(e.u, e.v);
                if sets.components() == 1 {
                    return true;
                }
            }
            sets.components() == 1
        }

        fn go(&mut self, k: usize, sets: &mut DisjointSets) -> Result<()> {
            if self.chosen.len() + 1 == self.g.n_vertices() {
                self.count += 1;
                if self.count > self.cap {
                    return Err(Error::EnumerationOverflow { cap: self.cap });
                }
                (self.visit)(&self.chosen);
                return Ok(());
            }
            if k == self.g.n_edges() {
                return Ok(());
            }
            let e = *self.g.edge(k);
            if sets.root(e.u) != sets.root(e.v) {
                let mut with = sets.clone();
                with.union(e.u, e.v);
                self.chosen.push(k);
                self.go(k + 1, &mut with)?;
                self.chosen.pop();
            }
            if self.still_connectable(sets, k + 1) {
                self.go(k + 1, sets)?;
            }
            Ok(())
        }
    }

    let mut walk = Walk { g, cap, count: 0, chosen: Vec::new(), visit };
    walk.go(0, &mut DisjointSets::new(g.n_vertices()))?;
    Ok(walk.count)
}

/// All spanning trees of `g` in deterministic order, or an overflow error when
/// there are more than `cap`.
pub fn enumerate_spanning_trees(g: &Graph, cap: usize) -> Result<Vec<SpanningTree>> {
    let mut trees = Vec::new();
    for_each_spanning_tree(g, cap, &mut |edges| {
        trees.push(SpanningTree::new(g, edges.to_vec()).expect("enumeration yields spanning trees"))
    })?;
    Ok(trees)
}

/// Exact number of spanning trees, aborting once it exceeds `cap`.
pub fn count_spanning_trees(g: &Graph, cap: usize) -> Result<usize> {
    for_each_spanning_tree(g, cap, &mut |_| {})
}

/// Which oracle produced a response.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResponseSource {
    Exact,
    Heuristic,
}

/// A tree returned to the edge player, with the normalized objective it
/// achieves against the queried strategy.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleResponse {
    pub tree: SpanningTree,
    pub achieved: f64,
    pub source: ResponseSource,
}

/// A δ-response oracle for the stretch game.
pub trait StretchOracle {
    fn respond(&mut self, g: &Graph, alpha: &[f64], lengths: &[f64]) -> Result<OracleResponse>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMode {
    Exact,
    Heuristic,
    Auto,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleConfig {
    pub mode: OracleMode,
    pub enumeration_cap: usize,
    /// Number of shortest-path-tree roots; `None` means `min(n, 32)`.
    pub heuristic_roots: Option<usize>,
    pub seed: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            mode: OracleMode::Auto,
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
            heuristic_roots: None,
            seed: 0,
        }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.enumeration_cap == 0 {
            return Err(invalid!("enumeration cap must be at least 1"));
        }
        if self.heuristic_roots == Some(0) {
            return Err(invalid!("heuristic needs at least one root"));
        }
        Ok(())
    }

    fn roots(&self, n: usize) -> usize {
        self.heuristic_roots.unwrap_or(n.min(32))
    }
}

fn check_query(g: &Graph, alpha: &[f64], lengths: &[f64]) -> Result<f64> {
    check_len(alpha, g.n_edges())?;
    check_positive_weights(lengths, g.n_edges(), "length")?;
    if alpha.iter().any(|&a| !(a >= 0.0) || !a.is_finite()) {
        return Err(invalid!("edge strategy must be finite and nonnegative"));
    }
    let total: f64 = alpha.iter().sum();
    if total > 0.0 {
        Ok(total)
    } else {
        Err(Error::ZeroWeights)
    }
}

fn normalized_objective(stretches: &[f64], alpha: &[f64], alpha_total: f64) -> f64 {
    stretches.iter().zip(alpha).map(|(s, a)| s * a).sum::<f64>() / alpha_total
}

/// Scores `candidates` and keeps the first minimizer.
fn best_of<'a>(
    g: &Graph,
    alpha: &[f64],
    lengths: &[f64],
    total: f64,
    candidates: impl IntoIterator<Item = &'a SpanningTree>,
) -> Option<(&'a SpanningTree, f64)> {
    let mut best: Option<(&SpanningTree, f64)> = None;
    for t in candidates {
        let value = normalized_objective(&tree_stretches(g, t, lengths), alpha, total);
        if best.is_none_or(|(_, b)| value < b) {
            best = Some((t, value));
        }
    }
    best
}

fn exact_over(g: &Graph, trees: &[SpanningTree], alpha: &[f64], lengths: &[f64]) -> Result<OracleResponse> {
    let total = check_query(g, alpha, lengths)?;
    let (tree, achieved) = best_of(g, alpha, lengths, total, trees)
        .ok_or_else(|| Error::Oracle("no spanning trees to choose from".into()))?;
    Ok(OracleResponse { tree: tree.clone(), achieved, source: ResponseSource::Exact })
}

/// Best response over all spanning trees (ties go to enumeration order).
pub fn exact_stretch_oracle(g: &Graph, alpha: &[f64], lengths: &[f64], cap: usize) -> Result<OracleResponse> {
    check_query(g, alpha, lengths)?;
    let trees = enumerate_spanning_trees(g, cap)?;
    exact_over(g, &trees, alpha, lengths)
}

/// Candidate trees of the heuristic, in scoring order.
fn heuristic_candidates(g: &Graph, alpha: &[f64], lengths: &[f64], config: &OracleConfig) -> Result<Vec<SpanningTree>> {
    let n = g.n_vertices();
    let k = config.roots(n);
    let roots: Vec<usize> = if k >= n {
        (0..n).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let mut picked = index::sample(&mut rng, n, k).into_vec();
        picked.sort_unstable();
        picked
    };
    // lengths discounted on heavily weighted edges pull those edges into the tree
    let total: f64 = alpha.iter().sum();
    let m = g.n_edges() as f64;
    let discounted: Vec<f64> = lengths.iter().zip(alpha).map(|(l, a)| l / (1.0 + m * a / total)).collect();

    let mut candidates = Vec::with_capacity(2 * roots.len() + 2);
    for weights in [lengths, &discounted[..]] {
        for &r in &roots {
            candidates.push(shortest_path_tree(g, r, weights)?);
        }
        candidates.push(minimum_spanning_tree(g, weights)?);
    }
    Ok(candidates)
}

/// Best response over shortest-path trees from sampled roots and minimum
/// spanning trees, under both the given lengths and α-discounted lengths.
pub fn heuristic_stretch_oracle(
    g: &Graph,
    alpha: &[f64],
    lengths: &[f64],
    config: &OracleConfig,
) -> Result<OracleResponse> {
    config.validate()?;
    let total = check_query(g, alpha, lengths)?;
    if !is_connected(g) {
        return Err(Error::Disconnected);
    }
    let candidates = heuristic_candidates(g, alpha, lengths, config)?;
    let (tree, achieved) = best_of(g, alpha, lengths, total, &candidates)
        .ok_or_else(|| Error::Oracle("heuristic produced no candidates".into()))?;
    Ok(OracleResponse { tree: tree.clone(), achieved, source: ResponseSource::Heuristic })
}

/// The determinant is approximate, so it only settles counts far above the cap.
fn clearly_exceeds(g: &Graph, cap: usize) -> bool {
    log_spanning_tree_count(g) > libm::log(2.0 * cap as f64)
}

/// Whether the exact oracle fits under `cap` on `g`.
pub fn exact_fits(g: &Graph, cap: usize) -> bool {
    !clearly_exceeds(g, cap) && count_spanning_trees(g, cap).is_ok()
}

/// Exact oracle when the tree count fits under the cap, heuristic otherwise.
pub fn auto_oracle(g: &Graph, alpha: &[f64], lengths: &[f64], config: &OracleConfig) -> Result<OracleResponse> {
    config.validate()?;
    if exact_fits(g, config.enumeration_cap) {
        exact_stretch_oracle(g, alpha, lengths, config.enumeration_cap)
    } else {
        heuristic_stretch_oracle(g, alpha, lengths, config)
    }
}

/// Stateful oracle following an [`OracleConfig`]. Enumerated trees and the
/// exact/heuristic decision are computed once per graph shape and reused.
#[derive(Debug, Clone)]
pub struct ConfiguredOracle {
    config: OracleConfig,
    trees: Option<((usize, usize), Option<Vec<SpanningTree>>)>,
}

impl ConfiguredOracle {
    pub fn new(config: OracleConfig) -> Result<Self> {
        config.validate()?;
        Ok(ConfiguredOracle { config, trees: None })
    }

    pub fn exact(cap: usize) -> Result<Self> {
        Self::new(OracleConfig { mode: OracleMode::Exact, enumeration_cap: cap, ..OracleConfig::default() })
    }

    pub fn config(&self) -> &OracleConfig {
        &self.config
    }

    /// Enumerated trees when this oracle runs exactly on `g`.
    fn trees_for(&mut self, g: &Graph) -> Result<Option<&[SpanningTree]>> {
        let shape = (g.n_vertices(), g.n_edges());
        if self.trees.as_ref().map(|(s, _)| *s) != Some(shape) {
            let cap = self.config.enumeration_cap;
            let trees = match self.config.mode {
                OracleMode::Exact => Some(enumerate_spanning_trees(g, cap)?),
                OracleMode::Heuristic => None,
                OracleMode::Auto => {
                    if clearly_exceeds(g, cap) {
                        None
                    } else {
                        match enumerate_spanning_trees(g, cap) {
                            Ok(trees) => Some(trees),
                            Err(Error::EnumerationOverflow { .. }) => None,
                            Err(e) => return Err(e),
                        }
                    }
                }
            };
            self.trees = Some((shape, trees));
        }
        Ok(self.trees.as_ref().and_then(|(_, t)| t.as_deref()))
    }
}

impl StretchOracle for ConfiguredOracle {
    fn respond(&mut self, g: &Graph, alpha: &[f64], lengths: &[f64]) -> Result<OracleResponse> {
        let config = self.config.clone();
        match self.trees_for(g)? {
            Some(trees) => exact_over(g, trees, alpha, lengths),
            None => heuristic_stretch_oracle(g, alpha, lengths, &config),
        }
    }
}
