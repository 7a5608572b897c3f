//! The substitution linking the capacity and distance views.
//!
//! For every mapping `M`,
//! `Σ_j β_j·load(j)/c_j = Σ_{i,j} β_j·M[i][j]·c_i/c_j`, and setting `α = β`,
//! `ℓ_i = β_i/c_i` turns this term by term into `Σ_i α_i·dist(i)/ℓ_i`. A
//! capacity query can therefore be answered by any distance oracle. Lengths
//! must stay positive, so edges of weight zero get a tiny floor length
//! instead; the objective shift this causes is bounded and reported.

use alloc::vec::Vec;

use super::{GameOracle, Metric};
use crate::error::{invalid, Error, Result};
use crate::graph::{check_len, check_positive_weights, EdgeId, Graph};
use crate::mapping::{canonical_mapping, weighted_congestion_objective};
use crate::oracle::{OracleResponse, StretchOracle};

/// Zero-weight edges get this fraction of the smallest regular value.
pub const ZERO_WEIGHT_FLOOR: f64 = 1e-12;

/// Result of substituting one view's (weights, values) into the other's.
#[derive(Debug, Clone, PartialEq)]
pub struct Substitution {
    /// α (or β): a copy of the input weights.
    pub weights: Vec<f64>,
    /// ℓ (or c): `weight / value` per edge, floored where the weight is zero.
    pub values: Vec<f64>,
    /// Edges that received the floor value.
    pub floored: Vec<EdgeId>,
    /// The floor value itself (0 when nothing was floored).
    pub floor: f64,
}

fn substitute(weights: &[f64], values: &[f64]) -> Result<Substitution> {
    check_positive_weights(values, values.len(), "value")?;
    check_len(weights, values.len())?;
    if weights.iter().any(|&w| !(w >= 0.0) || !w.is_finite()) {
        return Err(invalid!("weights must be finite and nonnegative"));
    }
    if !weights.iter().any(|&w| w > 0.0) {
        return Err(Error::ZeroWeights);
    }
    let mut out: Vec<f64> = weights.iter().zip(values).map(|(w, v)| w / v).collect();
    let min_positive = out.iter().copied().filter(|&x| x > 0.0).fold(f64::INFINITY, f64::min);
    let floor = ZERO_WEIGHT_FLOOR * min_positive;
    let mut floored = Vec::new();
    for (id, x) in out.iter_mut().enumerate() {
        if !(*x > 0.0) {
            *x = floor;
            floored.push(id);
        }
    }
    Ok(Substitution {
        weights: weights.to_vec(),
        floor: if floored.is_empty() { 0.0 } else { floor },
        values: out,
        floored,
    })
}

/// `(β, c) ↦ (α, ℓ)` with `α = β` and `ℓ_i = β_i / c_i`.
pub fn transform_cap_to_len(beta: &[f64], capacities: &[f64]) -> Result<Substitution> {
    substitute(beta, capacities)
}

/// `(α, ℓ) ↦ (β, c)` with `β = α` and `c_i = α_i / ℓ_i`.
pub fn transform_len_to_cap(alpha: &[f64], lengths: &[f64]) -> Result<Substitution> {
    substitute(alpha, lengths)
}

/// A congestion response obtained through a stretch oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformedResponse {
    /// The tree, with `achieved` = its normalized congestion objective.
    pub response: OracleResponse,
    /// What the stretch oracle reported on the transformed instance.
    pub transformed_value: f64,
    /// Upper bound on `|achieved − transformed_value|` caused by floored edges.
    pub perturbation_bound: f64,
}

/// Congestion-game oracle that delegates to a stretch oracle.
#[derive(Debug, Clone)]
pub struct CongestionFromStretch<O> {
    inner: O,
    capacities: Vec<f64>,
}

/// Wraps a stretch δ-response oracle into a congestion one for `capacities`.
pub fn congestion_oracle_from_stretch<O: StretchOracle>(oracle: O, capacities: &[f64]) -> CongestionFromStretch<O> {
    CongestionFromStretch { inner: oracle, capacities: capacities.to_vec() }
}

impl<O: StretchOracle> CongestionFromStretch<O> {
    pub fn inner(&self) -> &O {
        &self.inner
    }

    pub fn respond_detailed(&mut self, g: &Graph, beta: &[f64]) -> Result<TransformedResponse> {
        check_positive_weights(&self.capacities, g.n_edges(), "capacity")?;
        let sub = transform_cap_to_len(beta, &self.capacities)?;
        let stretch = self.inner.respond(g, &sub.weights, &sub.values)?;
        let total: f64 = beta.iter().sum();
        let mapping = canonical_mapping(g, &stretch.tree)?;
        let achieved = weighted_congestion_objective(&mapping, beta, &self.capacities)? / total;
        let perturbation_bound = floor_perturbation_bound(g, beta, &self.capacities, &sub);
        Ok(TransformedResponse {
            transformed_value: stretch.achieved,
            response: OracleResponse { achieved, ..stretch },
            perturbation_bound,
        })
    }
}

/// Bounds the gap between the normalized congestion objective and the
/// transformed stretch objective for any spanning tree.
///
/// The stretch side gains at most `floor · (n−1) · Σ_{β_i>0} c_i` from floored
/// lengths on tree paths; the congestion side keeps `Σ_{β_i=0} c_i · Σ_{β_j>0} β_j/c_j`
/// of load from zero-weight edges that the stretch side cannot see. The gap is
/// at most the larger of the two, divided by `Σβ`.
fn floor_perturbation_bound(g: &Graph, beta: &[f64], capacities: &[f64], sub: &Substitution) -> f64 {
    if sub.floored.is_empty() {
        return 0.0;
    }
    let total: f64 = beta.iter().sum();
    let path_edges = g.n_vertices().saturating_sub(1) as f64;
    let weighted_cap: f64 = beta.iter().zip(capacities).filter(|(b, _)| **b > 0.0).map(|(_, c)| c).sum();
    let gained = sub.floor * path_edges * weighted_cap;
    let zero_cap: f64 = sub.floored.iter().map(|&i| capacities[i]).sum();
    let ratio: f64 = beta.iter().zip(capacities).filter(|(b, _)| **b > 0.0).map(|(b, c)| b / c).sum();
    let hidden = zero_cap * ratio;
    gained.max(hidden) / total
}

impl<O: StretchOracle> GameOracle for CongestionFromStretch<O> {
    fn metric(&self) -> Metric {
        Metric::Congestion
    }

    fn respond(&mut self, g: &Graph, strategy: &[f64]) -> Result<OracleResponse> {
        Ok(self.respond_detailed(g, strategy)?.response)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::ConfiguredOracle;
    use alloc::vec;

    #[test]
    fn substitution_examples() {
        let s = transform_cap_to_len(&[1.0, 1.0], &[2.0, 4.0]).unwrap();
        assert_eq!(s.weights, vec![1.0, 1.0]);
        assert_eq!(s.values, vec![0.5, 0.25]);
        assert!(s.floored.is_empty());

        let s = transform_cap_to_len(&[1.0, 0.0], &[1.0, 1.0]).unwrap();
        assert_eq!(s.weights, vec![1.0, 0.0]);
        assert_eq!(s.values, vec![1.0, ZERO_WEIGHT_FLOOR]);
        assert_eq!(s.floored, vec![1]);

        let c = [0.3, 2.0, 7.5];
        assert_eq!(transform_cap_to_len(&c, &c).unwrap().values, vec![1.0; 3]);

        let s = transform_len_to_cap(&[1.0, 1.0], &[0.5, 0.25]).unwrap();
        assert_eq!(s.values, vec![2.0, 4.0]);
        let l = [0.4, 1.0, 9.0];
        assert_eq!(transform_len_to_cap(&l, &l).unwrap().values, vec![1.0; 3]);

        assert_eq!(transform_cap_to_len(&[0.0, 0.0], &[1.0, 1.0]), Err(Error::ZeroWeights));
    }

    #[test]
    fn round_trip_on_positive_weights() {
        let beta = [0.2, 1.5, 3.0, 0.7];
        let c = [1.0, 0.5, 2.0, 4.0];
        let there = transform_cap_to_len(&beta, &c).unwrap();
        let back = transform_len_to_cap(&there.weights, &there.values).unwrap();
        assert_eq!(back.weights, beta.to_vec());
        for (x, y) in back.values.iter().zip(c) {
            assert!((x - y).abs() <= 1e-15 * y);
        }
    }

    fn triangle() -> Graph {
        Graph::unit(3, &[(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    #[test]
    fn congestion_oracle_examples() {
        let g = triangle();
        let ones = [1.0; 3];
        let mut oracle = congestion_oracle_from_stretch(ConfiguredOracle::exact(10).unwrap(), &ones);
        let r = oracle.respond_detailed(&g, &ones).unwrap();
        assert!((r.response.achieved - 4.0 / 3.0).abs() < 1e-15);
        assert!((r.response.achieved - r.transformed_value).abs() < 1e-12);
        assert_eq!(r.perturbation_bound, 0.0);

        // all weight on edge 0: the tree avoiding it concedes no load at all
        let r = oracle.respond_detailed(&g, &[1.0, 0.0, 0.0]).unwrap();
        assert!(!r.response.tree.contains(0));
        assert_eq!(r.response.achieved, 0.0);
        assert!((r.response.achieved - r.transformed_value).abs() <= 1e-9 + r.perturbation_bound);

        let path = Graph::unit(3, &[(0, 1), (1, 2)]).unwrap();
        let mut oracle = congestion_oracle_from_stretch(ConfiguredOracle::exact(10).unwrap(), &[1.0, 1.0]);
        let r = oracle.respond(&path, &[0.25, 0.75]).unwrap();
        assert_eq!(r.achieved, 1.0);
    }
}
