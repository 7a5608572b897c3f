//! Mappings of edges to paths, and their distance and capacity views.
//!
//! A mapping sends every edge `i` to a nonempty multiset of edges, stored as a
//! sparse row of the matrix `M` where `M[i][j]` counts the copies of `j` on the
//! path of `i`. Lengths turn a row into a distance, `dist(i) = Σ_j M[i][j]·ℓ_j`;
//! capacities turn a column into a load, `load(j) = Σ_i M[i][j]·c_i`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{invalid, Error, Result};
use crate::graph::{check_len, check_positive_weights, EdgeId, Graph, RootedTree, SpanningTree};

/// Sparse nonnegative-integer matrix, one row per edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mapping {
    rows: Vec<Vec<(EdgeId, u32)>>,
}

impl Mapping {
    /// Builds a mapping from explicit rows. Entries of a row are merged and
    /// sorted; zero multiplicities are dropped. Every row must stay nonempty.
    pub fn from_rows(m: usize, rows: Vec<Vec<(EdgeId, u32)>>) -> Result<Self> {
        if rows.len() != m {
            return Err(invalid!("mapping over {m} edges needs {m} rows, got {}", rows.len()));
        }
        let mut clean = Vec::with_capacity(m);
        for (i, row) in rows.into_iter().enumerate() {
            let mut merged: BTreeMap<EdgeId, u32> = BTreeMap::new();
            for (j, k) in row {
                if j >= m {
                    return Err(invalid!("row {i} names edge {j} outside [0, {m})"));
                }
                if k > 0 {
                    *merged.entry(j).or_default() += k;
                }
            }
            if merged.is_empty() {
                return Err(invalid!("row {i} maps to an empty path"));
            }
            clean.push(merged.into_iter().collect());
        }
        Ok(Mapping { rows: clean })
    }

    pub fn identity(m: usize) -> Self {
        Mapping { rows: (0..m).map(|i| vec![(i, 1)]).collect() }
    }

    pub fn n_edges(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, i: EdgeId) -> &[(EdgeId, u32)] {
        &self.rows[i]
    }

    pub fn entry(&self, i: EdgeId, j: EdgeId) -> u32 {
        self.rows[i].binary_search_by_key(&j, |&(col, _)| col).map(|pos| self.rows[i][pos].1).unwrap_or(0)
    }

    /// `dist(i) = Σ_j M[i][j]·ℓ_j`.
    pub fn dist_of_edge(&self, lengths: &[f64], i: EdgeId) -> f64 {
        self.rows[i].iter().map(|&(j, k)| k as f64 * lengths[j]).sum()
    }

    /// `load(j) = Σ_i M[i][j]·c_i`. Scans every row; use [`Mapping::loads`]
    /// when all columns are needed.
    pub fn load_of_edge(&self, capacities: &[f64], j: EdgeId) -> f64 {
        (0..self.rows.len()).map(|i| self.entry(i, j) as f64 * capacities[i]).sum()
    }

    pub fn stretch_of_edge(&self, lengths: &[f64], i: EdgeId) -> f64 {
        self.dist_of_edge(lengths, i) / lengths[i]
    }

    pub fn congestion_of_edge(&self, capacities: &[f64], j: EdgeId) -> f64 {
        self.load_of_edge(capacities, j) / capacities[j]
    }

    pub fn distances(&self, lengths: &[f64]) -> Vec<f64> {
        (0..self.rows.len()).map(|i| self.dist_of_edge(lengths, i)).collect()
    }

    pub fn loads(&self, capacities: &[f64]) -> Vec<f64> {
        let mut loads = vec![0.0; self.rows.len()];
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, k) in row {
                loads[j] += k as f64 * capacities[i];
            }
        }
        loads
    }

    pub fn stretches(&self, lengths: &[f64]) -> Vec<f64> {
        self.distances(lengths).iter().zip(lengths).map(|(d, l)| d / l).collect()
    }

    pub fn congestions(&self, capacities: &[f64]) -> Vec<f64> {
        self.loads(capacities).iter().zip(capacities).map(|(x, c)| x / c).collect()
    }
}

/// The mapping induced by a spanning tree: every edge goes to the tree path
/// joining its endpoints (so tree edges go to themselves).
pub fn canonical_mapping(g: &Graph, t: &SpanningTree) -> Result<Mapping> {
    t.check_host(g)?;
    let rooted = RootedTree::new(g, t, 0);
    let rows = g
        .edges()
        .iter()
        .enumerate()
        .map(|(i, e)| {
            if t.contains(i) {
                vec![(i, 1)]
            } else {
                let mut path: Vec<(EdgeId, u32)> = rooted.path_edges(e.u, e.v).into_iter().map(|j| (j, 1)).collect();
                path.sort_unstable();
                path
            }
        })
        .collect();
    Ok(Mapping { rows })
}

fn weight_sum(weights: &[f64]) -> Result<f64> {
    if weights.iter().any(|&w| !(w >= 0.0) || !w.is_finite()) {
        return Err(invalid!("weights must be finite and nonnegative"));
    }
    let total: f64 = weights.iter().sum();
    if total > 0.0 {
        Ok(total)
    } else {
        Err(Error::ZeroWeights)
    }
}

/// `Σ_i α_i·dist(i)/ℓ_i`, unnormalized.
pub fn weighted_stretch_objective(m: &Mapping, alpha: &[f64], lengths: &[f64]) -> Result<f64> {
    check_len(alpha, m.n_edges())?;
    check_positive_weights(lengths, m.n_edges(), "length")?;
    weight_sum(alpha)?;
    Ok(alpha
        .iter()
        .enumerate()
        .filter(|&(_, &a)| a > 0.0)
        .map(|(i, &a)| a * m.dist_of_edge(lengths, i) / lengths[i])
        .sum())
}

/// `Σ_j β_j·load(j)/c_j`, unnormalized.
pub fn weighted_congestion_objective(m: &Mapping, beta: &[f64], capacities: &[f64]) -> Result<f64> {
    check_len(beta, m.n_edges())?;
    check_positive_weights(capacities, m.n_edges(), "capacity")?;
    weight_sum(beta)?;
    let loads = m.loads(capacities);
    Ok(beta.iter().enumerate().filter(|&(_, &b)| b > 0.0).map(|(j, &b)| b * loads[j] / capacities[j]).sum())
}

/// Absolute tolerance on the total probability of a distribution.
pub const PROBABILITY_TOLERANCE: f64 = 1e-12;

/// A finite distribution over spanning trees of one host graph.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilisticMapping {
    support: Vec<(SpanningTree, f64)>,
}

impl ProbabilisticMapping {
    pub fn new(support: Vec<(SpanningTree, f64)>) -> Result<Self> {
        let Some((first, _)) = support.first() else {
            return Err(invalid!("a distribution needs at least one tree"));
        };
        let mut total = 0.0;
        for (t, w) in &support {
            if !(*w >= 0.0) || !w.is_finite() {
                return Err(invalid!("tree weight {w} is negative or not finite"));
            }
            if t.host_shape() != first.host_shape() {
                return Err(invalid!("trees of a distribution must share one host graph"));
            }
            total += w;
        }
        if (total - 1.0).abs() > PROBABILITY_TOLERANCE {
            return Err(invalid!("tree weights sum to {total}, not 1"));
        }
        Ok(ProbabilisticMapping { support })
    }

    /// Uniform distribution over `trees` (duplicates keep their multiplicity).
    pub fn uniform(trees: Vec<SpanningTree>) -> Result<Self> {
        let w = 1.0 / trees.len() as f64;
        Self::normalized(trees.into_iter().map(|t| (t, w)).collect())
    }

    /// Builds from nonnegative weights of any positive total, rescaling to 1.
    pub fn normalized(support: Vec<(SpanningTree, f64)>) -> Result<Self> {
        let total: f64 = support.iter().map(|(_, w)| *w).sum();
        if !(total > 0.0) {
            return Err(Error::ZeroWeights);
        }
        Self::new(support.into_iter().map(|(t, w)| (t, w / total)).collect())
    }

    pub fn single(t: SpanningTree) -> Self {
        ProbabilisticMapping { support: vec![(t, 1.0)] }
    }

    pub fn support(&self) -> &[(SpanningTree, f64)] {
        &self.support
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    /// Merges duplicate trees (summing weights) and drops zero-weight trees,
    /// keeping first-appearance order.
    pub fn merged(&self) -> Self {
        let mut index: BTreeMap<&SpanningTree, usize> = BTreeMap::new();
        let mut out: Vec<(SpanningTree, f64)> = Vec::new();
        for (t, w) in &self.support {
            match index.get(t) {
                Some(&pos) => out[pos].1 += w,
                None => {
                    index.insert(t, out.len());
                    out.push((t.clone(), *w));
                }
            }
        }
        out.retain(|(_, w)| *w > 0.0);
        ProbabilisticMapping { support: out }
    }

    /// Mixture `θ·self + (1−θ)·other`.
    pub fn mix(&self, other: &Self, theta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&theta) {
            return Err(invalid!("mixture coefficient {theta} outside [0, 1]"));
        }
        let mut support: Vec<_> = self.support.iter().map(|(t, w)| (t.clone(), theta * w)).collect();
        support.extend(other.support.iter().map(|(t, w)| (t.clone(), (1.0 - theta) * w)));
        Self::new(support)
    }
}

/// Per-edge averages of a metric under a distribution and their maximum.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricProfile {
    pub per_edge: Vec<f64>,
    pub overall: f64,
}

impl MetricProfile {
    pub fn from_per_edge(per_edge: Vec<f64>) -> Self {
        let overall = per_edge.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        MetricProfile { per_edge, overall }
    }
}

/// Per-edge stretches of `t` under `lengths`, via root distances.
pub(crate) fn tree_stretches(g: &Graph, t: &SpanningTree, lengths: &[f64]) -> Vec<f64> {
    let rooted = RootedTree::new(g, t, 0);
    g.edges()
        .iter()
        .enumerate()
        .map(|(i, e)| {
            if t.contains(i) {
                1.0
            } else {
                let d: f64 = rooted.path_edges(e.u, e.v).iter().map(|&j| lengths[j]).sum();
                d / lengths[i]
            }
        })
        .collect()
}

/// Per-edge congestions of `t` under `capacities`, via subtree sums.
pub(crate) fn tree_congestions(g: &Graph, t: &SpanningTree, capacities: &[f64]) -> Vec<f64> {
    let loads = tree_loads(g, t, capacities);
    loads.iter().zip(capacities).map(|(x, c)| x / c).collect()
}

/// Load on every edge of `g` (zero off the tree). The capacity of each graph
/// edge is pushed onto its endpoints and removed twice at their lowest common
/// ancestor; the subtree sum below a tree edge is then exactly the capacity
/// crossing it.
pub(crate) fn tree_loads(g: &Graph, t: &SpanningTree, capacities: &[f64]) -> Vec<f64> {
    let rooted = RootedTree::new(g, t, 0);
    let n = g.n_vertices();
    let mut excess = vec![0.0; n];
    for (i, e) in g.edges().iter().enumerate() {
        let c = capacities[i];
        excess[e.u] += c;
        excess[e.v] += c;
        excess[rooted.lca(e.u, e.v)] -= 2.0 * c;
    }
    let mut loads = vec![0.0; g.n_edges()];
    for &x in rooted.order.iter().rev() {
        let pe = rooted.parent_edge[x];
        if pe != usize::MAX {
            loads[pe] = excess[x];
            let p = rooted.parent[x];
            excess[p] += excess[x];
        }
    }
    loads
}

fn averaged(
    pm: &ProbabilisticMapping,
    g: &Graph,
    per_tree: impl Fn(&SpanningTree) -> Vec<f64>,
) -> Result<MetricProfile> {
    let mut acc = vec![0.0; g.n_edges()];
    for (t, w) in pm.support() {
        t.check_host(g)?;
        if *w == 0.0 {
            continue;
        }
        for (a, x) in acc.iter_mut().zip(per_tree(t)) {
            *a += w * x;
        }
    }
    Ok(MetricProfile::from_per_edge(acc))
}

/// λ-averaged stretch of every edge and the overall (maximum) stretch.
pub fn prob_stretch(pm: &ProbabilisticMapping, g: &Graph, lengths: &[f64]) -> Result<MetricProfile> {
    check_positive_weights(lengths, g.n_edges(), "length")?;
    averaged(pm, g, |t| tree_stretches(g, t, lengths))
}

/// λ-averaged congestion of every edge and the overall (maximum) congestion.
pub fn prob_congestion(pm: &ProbabilisticMapping, g: &Graph, capacities: &[f64]) -> Result<MetricProfile> {
    check_positive_weights(capacities, g.n_edges(), "capacity")?;
    averaged(pm, g, |t| tree_congestions(g, t, capacities))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Edge;

    fn triangle() -> Graph {
        Graph::unit(3, &[(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    fn four_cycle() -> Graph {
        Graph::unit(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap()
    }

    fn all_trees(g: &Graph, sets: &[&[usize]]) -> Vec<SpanningTree> {
        sets.iter().map(|s| SpanningTree::new(g, s.to_vec()).unwrap()).collect()
    }

    #[test]
    fn canonical_mapping_examples() {
        let path = Graph::unit(3, &[(0, 1), (1, 2)]).unwrap();
        let t = SpanningTree::new(&path, vec![0, 1]).unwrap();
        assert_eq!(canonical_mapping(&path, &t).unwrap(), Mapping::identity(2));

        let g = triangle();
        let t = SpanningTree::new(&g, vec![0, 1]).unwrap();
        let m = canonical_mapping(&g, &t).unwrap();
        assert_eq!(m.row(0), &[(0, 1)]);
        assert_eq!(m.row(1), &[(1, 1)]);
        assert_eq!(m.row(2), &[(0, 1), (1, 1)]);

        let g = four_cycle();
        let t = SpanningTree::new(&g, vec![0, 1, 2]).unwrap();
        let m = canonical_mapping(&g, &t).unwrap();
        assert_eq!(m.row(3), &[(0, 1), (1, 1), (2, 1)]);
    }

    #[test]
    fn canonical_mapping_rejects_foreign_tree() {
        let g = four_cycle();
        let t = SpanningTree::new(&triangle(), vec![0, 1]).unwrap();
        assert!(canonical_mapping(&g, &t).is_err());
    }

    #[test]
    fn distances_and_loads() {
        let id = Mapping::identity(3);
        let l = [2.0, 3.0, 5.0];
        assert_eq!(id.dist_of_edge(&l, 2), 5.0);
        assert_eq!(id.stretch_of_edge(&l, 2), 1.0);
        assert_eq!(id.congestion_of_edge(&l, 1), 1.0);

        let g = triangle();
        let t = SpanningTree::new(&g, vec![0, 1]).unwrap();
        let m = canonical_mapping(&g, &t).unwrap();
        let ones = [1.0; 3];
        assert_eq!(m.dist_of_edge(&ones, 2), 2.0);
        assert_eq!(m.stretch_of_edge(&ones, 2), 2.0);
        assert_eq!(m.load_of_edge(&ones, 0), 2.0);
        assert_eq!(m.congestion_of_edge(&ones, 0), 2.0);
        assert_eq!(m.load_of_edge(&ones, 2), 0.0);

        let g = four_cycle();
        let t = SpanningTree::new(&g, vec![0, 1, 2]).unwrap();
        let m = canonical_mapping(&g, &t).unwrap();
        let ones = [1.0; 4];
        assert_eq!(m.stretch_of_edge(&ones, 3), 3.0);
        assert_eq!(m.congestions(&ones), vec![2.0, 2.0, 2.0, 0.0]);
    }

    #[test]
    fn weighted_objectives() {
        let id = Mapping::identity(3);
        assert_eq!(weighted_stretch_objective(&id, &[1.0, 2.0, 0.5], &[3.0, 1.0, 2.0]).unwrap(), 3.5);
        assert_eq!(weighted_congestion_objective(&id, &[1.0, 2.0, 0.5], &[3.0, 1.0, 2.0]).unwrap(), 3.5);

        let g = triangle();
        let t = SpanningTree::new(&g, vec![0, 1]).unwrap();
        let m = canonical_mapping(&g, &t).unwrap();
        let ones = [1.0; 3];
        assert_eq!(weighted_stretch_objective(&m, &ones, &ones).unwrap(), 4.0);
        assert_eq!(weighted_stretch_objective(&m, &[0.0, 0.0, 1.0], &ones).unwrap(), 2.0);
        assert_eq!(weighted_congestion_objective(&m, &ones, &ones).unwrap(), 4.0);
        assert_eq!(weighted_congestion_objective(&m, &[1.0, 0.0, 0.0], &ones).unwrap(), 2.0);
        assert_eq!(weighted_stretch_objective(&m, &[0.0; 3], &ones), Err(Error::ZeroWeights));
        assert_eq!(weighted_congestion_objective(&m, &[0.0; 3], &ones), Err(Error::ZeroWeights));
    }

    #[test]
    fn probabilistic_metrics() {
        let path = Graph::unit(3, &[(0, 1), (1, 2)]).unwrap();
        let pm = ProbabilisticMapping::single(SpanningTree::new(&path, vec![0, 1]).unwrap());
        assert_eq!(prob_stretch(&pm, &path, &path.lengths()).unwrap().overall, 1.0);
        assert_eq!(prob_congestion(&pm, &path, &path.capacities()).unwrap().overall, 1.0);

        let g = triangle();
        let pm = ProbabilisticMapping::uniform(all_trees(&g, &[&[0, 1], &[0, 2], &[1, 2]])).unwrap();
        let s = prob_stretch(&pm, &g, &g.lengths()).unwrap();
        let c = prob_congestion(&pm, &g, &g.capacities()).unwrap();
        for x in s.per_edge.iter().chain(&c.per_edge) {
            assert!((x - 4.0 / 3.0).abs() < 1e-15);
        }

        let g = four_cycle();
        let pm =
            ProbabilisticMapping::uniform(all_trees(&g, &[&[0, 1, 2], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3]])).unwrap();
        let s = prob_stretch(&pm, &g, &g.lengths()).unwrap();
        let c = prob_congestion(&pm, &g, &g.capacities()).unwrap();
        for x in s.per_edge.iter().chain(&c.per_edge) {
            assert!((x - 1.5).abs() < 1e-15);
        }
    }

    #[test]
    fn tree_loads_match_mapping_loads() {
        let g = Graph::new(
            4,
            vec![
                Edge::new(0, 1, 1.0, 2.0),
                Edge::new(1, 2, 1.0, 3.0),
                Edge::new(2, 3, 1.0, 5.0),
                Edge::new(3, 0, 1.0, 7.0),
                Edge::new(0, 2, 1.0, 11.0),
            ],
        )
        .unwrap();
        let t = SpanningTree::new(&g, vec![0, 1, 2]).unwrap();
        let m = canonical_mapping(&g, &t).unwrap();
        assert_eq!(tree_loads(&g, &t, &g.capacities()), m.loads(&g.capacities()));
    }

    #[test]
    fn distribution_validation() {
        let g = triangle();
        let t = SpanningTree::new(&g, vec![0, 1]).unwrap();
        assert!(ProbabilisticMapping::new(vec![(t.clone(), 0.5)]).is_err());
        assert!(ProbabilisticMapping::new(vec![(t.clone(), 1.5), (t.clone(), -0.5)]).is_err());
        assert!(ProbabilisticMapping::new(vec![]).is_err());
        let u = SpanningTree::new(&g, vec![0, 2]).unwrap();
        let pm = ProbabilisticMapping::new(vec![(t.clone(), 0.25), (u, 0.5), (t, 0.25)]).unwrap();
        let merged = pm.merged();
        assert_eq!(merged.len(), 2);
        assert_eq!(merged.support()[0].1, 0.5);
    }
}
