//! The zero-sum game between a tree player and an edge player.
//!
//! Rows are spanning trees, columns are edges, and the payoff is the stretch
//! (or congestion) the edge suffers under the tree. Small games are solved
//! exactly by linear programming; large ones by multiplicative weights driven
//! by a δ-response oracle.

mod exact;
mod mwu;
mod simplex;
mod transform;

use alloc::vec::Vec;

pub use mwu::{mwu_solve, LearningRate, MwuOutcome, MwuParams};
pub use simplex::{lp_minimax, MinimaxSolution, Payoffs, CERTIFICATE_GAP};
pub use transform::{
    congestion_oracle_from_stretch, transform_cap_to_len, transform_len_to_cap, CongestionFromStretch, Substitution,
    TransformedResponse, ZERO_WEIGHT_FLOOR,
};

use crate::error::{invalid, Result};
use crate::graph::{EdgeId, Graph, SpanningTree};
use crate::mapping::{tree_congestions, tree_stretches, ProbabilisticMapping};
use crate::oracle::{OracleResponse, StretchOracle};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Stretch,
    Congestion,
}

impl Metric {
    /// Payoff of every edge under `t`, using the graph's own lengths or
    /// capacities.
    pub fn payoffs(self, g: &Graph, t: &SpanningTree) -> Vec<f64> {
        match self {
            Metric::Stretch => tree_stretches(g, t, &g.lengths()),
            Metric::Congestion => tree_congestions(g, t, &g.capacities()),
        }
    }
}

/// Payoff matrix labelled by trees (rows) and edges (columns).
#[derive(Debug, Clone, PartialEq)]
pub struct GameMatrix {
    rows: Vec<SpanningTree>,
    cols: Vec<EdgeId>,
    payoffs: Payoffs,
}

impl GameMatrix {
    pub fn rows(&self) -> &[SpanningTree] {
        &self.rows
    }

    pub fn cols(&self) -> &[EdgeId] {
        &self.cols
    }

    pub fn payoffs(&self) -> &Payoffs {
        &self.payoffs
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.payoffs.get(i, j)
    }
}

/// Builds the game for `metric` over the given trees.
pub fn build_game(g: &Graph, trees: &[SpanningTree], metric: Metric) -> Result<GameMatrix> {
    if trees.is_empty() {
        return Err(invalid!("a game needs at least one tree"));
    }
    let mut data = Vec::with_capacity(trees.len() * g.n_edges());
    for t in trees {
        t.check_host(g)?;
        data.extend(metric.payoffs(g, t));
    }
    Ok(GameMatrix {
        rows: trees.to_vec(),
        cols: (0..g.n_edges()).collect(),
        payoffs: Payoffs::new(trees.len(), g.n_edges(), data)?,
    })
}

/// `A[i][j]` = stretch of edge `j` under tree `i`.
pub fn build_stretch_game(g: &Graph, trees: &[SpanningTree]) -> Result<GameMatrix> {
    build_game(g, trees, Metric::Stretch)
}

/// `A[i][j]` = congestion of edge `j` under tree `i`.
pub fn build_congestion_game(g: &Graph, trees: &[SpanningTree]) -> Result<GameMatrix> {
    build_game(g, trees, Metric::Congestion)
}

/// Minimizes the larger of stretch and congestion over one distribution: the
/// column set is the union of both games' columns.
pub fn lp_joint_minimax(stretch_game: &GameMatrix, congestion_game: &GameMatrix) -> Result<MinimaxSolution> {
    if stretch_game.rows != congestion_game.rows {
        return Err(invalid!("stretch and congestion games must share their rows"));
    }
    lp_minimax(&stretch_game.payoffs.hstack(&congestion_game.payoffs)?)
}

/// Turns an LP row strategy into a distribution over the game's trees,
/// dropping trees with zero weight.
pub fn distribution_from_solution(game: &GameMatrix, solution: &MinimaxSolution) -> Result<ProbabilisticMapping> {
    let support = solution.support().map(|i| (game.rows[i].clone(), solution.row_strategy[i])).collect();
    ProbabilisticMapping::normalized(support)
}

/// A δ-response oracle for one side of the game: given the edge player's
/// mixed strategy it returns a tree and the normalized payoff it concedes.
pub trait GameOracle {
    fn metric(&self) -> Metric;
    fn respond(&mut self, g: &Graph, strategy: &[f64]) -> Result<OracleResponse>;
}

/// Plays the stretch game with a stretch oracle and the graph's lengths.
#[derive(Debug, Clone)]
pub struct StretchPlayer<O>(pub O);

impl<O: StretchOracle> GameOracle for StretchPlayer<O> {
    fn metric(&self) -> Metric {
        Metric::Stretch
    }

    fn respond(&mut self, g: &Graph, strategy: &[f64]) -> Result<OracleResponse> {
        self.0.respond(g, strategy, &g.lengths())
    }
}

/// Re-optimizes the weights of a distribution over its own (merged) support.
///
/// The result is a basic optimal solution of the restricted LP, so at most one
/// tree per edge survives, and its overall metric never exceeds the input's.
pub fn prune_support(pm: &ProbabilisticMapping, metric: Metric, g: &Graph) -> Result<ProbabilisticMapping> {
    let merged = pm.merged();
    let trees: Vec<SpanningTree> = merged.support().iter().map(|(t, _)| t.clone()).collect();
    let game = build_game(g, &trees, metric)?;
    let before = game
        .payoffs
        .column_payoffs(&merged.support().iter().map(|(_, w)| *w).collect::<Vec<_>>())
        .into_iter()
        .fold(f64::NEG_INFINITY, f64::max);
    let solution = lp_minimax(&game.payoffs)?;
    if solution.value > before {
        return Ok(merged);
    }
    distribution_from_solution(&game, &solution)
}
