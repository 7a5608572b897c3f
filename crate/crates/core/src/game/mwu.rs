//! Multiplicative weights for the edge player against a δ-response oracle.
//!
//! The edge player keeps exponential weights on cumulative payoffs; each round
//! the oracle answers the current mixed strategy with a tree, every edge
//! collects its payoff under that tree, and the tree player's output is the
//! uniform distribution over the answered trees. The Hedge regret bound then
//! caps every edge's average payoff by the mean conceded value plus a term
//! that shrinks like `sqrt(ln m / T)`.
//!
//! Payoffs are not known in advance to lie in `[0, 1]`, so the rate is scaled
//! by the largest payoff seen before the round. With the nonincreasing rates
//! `η_t = η / W_{t-1}` the exponentially weighted forecaster has regret at
//! most `(2/η_{T+1} − 1/η_1)·ln m + Σ_t η_t·r_t²/8`, where `r_t` is the payoff
//! range of round `t`; that sum is what gets reported, never less than the
//! fixed-scale bound `W·(ln m/η + η·T/8)/T` with `W` the final scale.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::GameOracle;
use crate::error::{invalid, Error, Result};
use crate::graph::{is_connected, Graph, SpanningTree};
use crate::mapping::ProbabilisticMapping;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LearningRate {
    /// `sqrt(8·ln m / T)`.
    Auto,
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MwuParams {
    pub rounds: usize,
    pub eta: LearningRate,
}

impl Default for MwuParams {
    fn default() -> Self {
        MwuParams { rounds: 1000, eta: LearningRate::Auto }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MwuOutcome {
    /// Uniform over the answered trees, duplicates merged.
    pub distribution: ProbabilisticMapping,
    /// Value the oracle conceded in each round.
    pub deltas: Vec<f64>,
    /// Average payoff of every edge under `distribution`.
    pub average_payoffs: Vec<f64>,
    /// Per-round bound on `max_i average_payoff_i − mean(deltas)`.
    pub regret_bound: f64,
    /// `W·sqrt(ln m / (2T))`-style bound at the final payoff scale.
    pub nominal_regret_bound: f64,
    /// Largest payoff observed (the scale `W`).
    pub payoff_bound: f64,
    pub eta: f64,
}

impl MwuOutcome {
    pub fn mean_delta(&self) -> f64 {
        self.deltas.iter().sum::<f64>() / self.deltas.len() as f64
    }

    pub fn max_average_payoff(&self) -> f64 {
        self.average_payoffs.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Whether `max_i average_payoff_i ≤ mean(δ) + regret_bound` holds, with
    /// a relative slack for rounding.
    pub fn guarantee_holds(&self) -> bool {
        let rhs = self.mean_delta() + self.regret_bound;
        self.max_average_payoff() <= rhs + 1e-9 * rhs.abs().max(1.0)
    }
}

fn softmax(scores: &[f64], rate: f64) -> Vec<f64> {
    let top = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut p: Vec<f64> = scores.iter().map(|s| libm::exp(rate * (s - top))).collect();
    let total: f64 = p.iter().sum();
    for x in &mut p {
        *x /= total;
    }
    p
}

/// Runs `params.rounds` rounds of Hedge for the edge player.
pub fn mwu_solve(g: &Graph, oracle: &mut dyn GameOracle, params: MwuParams) -> Result<MwuOutcome> {
    if params.rounds == 0 {
        return Err(invalid!("multiplicative weights needs at least one round"));
    }
    if !is_connected(g) {
        return Err(Error::Disconnected);
    }
    let m = g.n_edges();
    if m == 0 {
        return Err(invalid!("graph has no edges"));
    }
    let rounds = params.rounds;
    let ln_m = libm::log(m as f64);
    let eta = match params.eta {
        LearningRate::Auto => libm::sqrt(8.0 * ln_m / rounds as f64),
        LearningRate::Fixed(x) if x >= 0.0 && x.is_finite() => x,
        LearningRate::Fixed(x) => return Err(invalid!("learning rate {x} must be finite and nonnegative")),
    };
    let metric = oracle.metric();

    let mut cumulative = vec![0.0; m];
    let mut scale = 0.0f64;
    let mut deltas = Vec::with_capacity(rounds);
    let mut trees: Vec<SpanningTree> = Vec::with_capacity(rounds);
    // Σ_t r_t²/W_{t-1}, with W_0 taken as W_1
    let mut local_terms = 0.0;
    let mut first_scale = 0.0;

    for t in 0..rounds {
        let rate = if scale > 0.0 { eta / scale } else { 0.0 };
        let strategy = softmax(&cumulative, rate);
        let response = oracle.respond(g, &strategy)?;
        let payoffs = metric.payoffs(g, &response.tree);
        let conceded: f64 = strategy.iter().zip(&payoffs).map(|(p, x)| p * x).sum();
        if (conceded - response.achieved).abs() > 1e-9 * conceded.abs().max(1.0) {
            return Err(Error::Oracle(format!(
                "round {}: oracle reported {} but its tree concedes {conceded}",
                t + 1,
                response.achieved
            )));
        }
        let hi = payoffs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = payoffs.iter().copied().fold(f64::INFINITY, f64::min);
        if t == 0 {
            first_scale = hi;
        }
        let previous = if t == 0 { hi } else { scale };
        if previous > 0.0 {
            local_terms += (hi - lo) * (hi - lo) / previous;
        }
        scale = scale.max(hi);
        for (c, x) in cumulative.iter_mut().zip(&payoffs) {
            *c += x;
        }
        deltas.push(response.achieved);
        trees.push(response.tree);
    }

    let total_regret = if m == 1 || scale == 0.0 {
        0.0
    } else if eta == 0.0 {
        f64::INFINITY
    } else {
        // η_1 = η/W_1, η_{T+1} = η/W_T
        (2.0 * scale - first_scale) * ln_m / eta + eta * local_terms / 8.0
    };
    let nominal = if m == 1 {
        0.0
    } else if eta == 0.0 {
        f64::INFINITY
    } else {
        scale * (ln_m / eta + eta * rounds as f64 / 8.0) / rounds as f64
    };
    let regret_bound = (total_regret / rounds as f64).max(nominal);

    let distribution = ProbabilisticMapping::uniform(trees)?.merged();
    let average_payoffs = cumulative.iter().map(|c| c / rounds as f64).collect();
    Ok(MwuOutcome {
        distribution,
        deltas,
        average_payoffs,
        regret_bound,
        nominal_regret_bound: nominal,
        payoff_bound: scale,
        eta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{congestion_oracle_from_stretch, StretchPlayer};
    use crate::mapping::{prob_congestion, prob_stretch};
    use crate::oracle::ConfiguredOracle;

    fn triangle() -> Graph {
        Graph::unit(3, &[(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    #[test]
    fn tree_graph_converges_immediately() {
        let g = Graph::unit(3, &[(0, 1), (1, 2)]).unwrap();
        let params = MwuParams { rounds: 10, eta: LearningRate::Auto };
        let mut stretch = StretchPlayer(ConfiguredOracle::exact(10).unwrap());
        let out = mwu_solve(&g, &mut stretch, params).unwrap();
        assert_eq!(out.distribution.len(), 1);
        assert_eq!(out.distribution.support()[0].1, 1.0);
        assert_eq!(out.max_average_payoff(), 1.0);
        assert!(out.guarantee_holds());

        let mut congestion = congestion_oracle_from_stretch(ConfiguredOracle::exact(10).unwrap(), &g.capacities());
        let out = mwu_solve(&g, &mut congestion, params).unwrap();
        assert_eq!(out.max_average_payoff(), 1.0);
    }

    #[test]
    fn triangle_congestion_converges() {
        let g = triangle();
        let mut oracle = congestion_oracle_from_stretch(ConfiguredOracle::exact(10).unwrap(), &g.capacities());
        let out = mwu_solve(&g, &mut oracle, MwuParams { rounds: 2000, eta: LearningRate::Auto }).unwrap();
        let overall = prob_congestion(&out.distribution, &g, &g.capacities()).unwrap().overall;
        assert!(overall <= 4.0 / 3.0 + out.regret_bound);
        assert!(out.guarantee_holds());
        assert!((overall - out.max_average_payoff()).abs() < 1e-9);
        // nominal bound at auto rate is W·sqrt(ln m/(2T))
        let expected = out.payoff_bound * libm::sqrt(libm::log(3.0) / 4000.0);
        assert!((out.nominal_regret_bound - expected).abs() < 1e-12);
    }

    #[test]
    fn four_cycle_stretch_converges() {
        let g = Graph::unit(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let mut oracle = StretchPlayer(ConfiguredOracle::exact(10).unwrap());
        let out = mwu_solve(&g, &mut oracle, MwuParams { rounds: 2000, eta: LearningRate::Auto }).unwrap();
        let overall = prob_stretch(&out.distribution, &g, &g.lengths()).unwrap().overall;
        assert!(overall <= 1.5 + out.regret_bound);
        assert!(out.guarantee_holds());
    }

    #[test]
    fn rejects_zero_rounds() {
        let g = triangle();
        let mut oracle = StretchPlayer(ConfiguredOracle::exact(10).unwrap());
        assert!(mwu_solve(&g, &mut oracle, MwuParams { rounds: 0, eta: LearningRate::Auto }).is_err());
    }
}
