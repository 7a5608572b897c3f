//! The four subcommands. Each returns the text it would print together with
//! whether every internal check passed.

use std::fmt::Write as _;
use std::path::PathBuf;

use log::{debug, info};
use thiserror::Error;
use treemap_core::bisection::{min_bisection_approx, BisectionParams, SolveMethod};
use treemap_core::game::{
    build_congestion_game, build_game, build_stretch_game, congestion_oracle_from_stretch, distribution_from_solution,
    lp_joint_minimax, lp_minimax, mwu_solve, prune_support, GameOracle, LearningRate, Metric, MwuParams, StretchPlayer,
};
use treemap_core::mapping::{prob_congestion, prob_stretch};
use treemap_core::oracle::{enumerate_spanning_trees, ConfiguredOracle, OracleConfig, OracleMode};
use treemap_core::paths::PathsGraph;
use treemap_core::planar::{build_dual, check_corollary, check_duality, dual_is_involutive};
use treemap_core::{Graph, ProbabilisticMapping};

use crate::io::{self, num, IoError};

/// Slack for the bounds checked on the paths instance.
const BOUND_SLACK: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Io(#[from] IoError),
    #[error(transparent)]
    Core(#[from] treemap_core::Error),
    #[error("{0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Lp,
    Mwu,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub graph: Option<PathBuf>,
    pub rotation: Option<PathBuf>,
    pub distribution: Option<PathBuf>,
    pub metric: Metric,
    /// `None` lets `bisect` choose by tree count; `solve` defaults to LP.
    pub method: Option<Method>,
    pub rounds: usize,
    pub eta: LearningRate,
    pub seed: u64,
    pub cap: usize,
    pub prune: bool,
    /// Number of path edges of the paths instance.
    pub n: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            graph: None,
            rotation: None,
            distribution: None,
            metric: Metric::Stretch,
            method: None,
            rounds: 1000,
            eta: LearningRate::Auto,
            seed: 0,
            cap: 5000,
            prune: false,
            n: 16,
        }
    }
}

impl RunConfig {
    fn graph(&self) -> Result<Graph> {
        let path = self.graph.as_ref().ok_or_else(|| CliError::Usage("--graph is required".into()))?;
        Ok(io::load_graph(path)?)
    }

    fn oracle(&self) -> OracleConfig {
        OracleConfig { mode: OracleMode::Auto, enumeration_cap: self.cap, heuristic_roots: None, seed: self.seed }
    }

    fn mwu(&self) -> MwuParams {
        MwuParams { rounds: self.rounds, eta: self.eta }
    }
}

/// Output text and the verdict of the run's own checks.
#[derive(Debug, Clone, PartialEq)]
pub struct Run {
    pub output: String,
    pub passed: bool,
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "fail"
    }
}

fn overall(pm: &ProbabilisticMapping, g: &Graph, metric: Metric) -> Result<f64> {
    Ok(match metric {
        Metric::Stretch => prob_stretch(pm, g, &g.lengths())?.overall,
        Metric::Congestion => prob_congestion(pm, g, &g.capacities())?.overall,
    })
}

pub fn cmd_solve(config: &RunConfig) -> Result<Run> {
    let g = config.graph()?;
    let metric = config.metric;
    match config.method.unwrap_or(Method::Lp) {
        Method::Lp => {
            let trees = enumerate_spanning_trees(&g, config.cap).map_err(|e| match e {
                treemap_core::Error::EnumerationOverflow { cap } => CliError::Usage(format!(
                    "more than {cap} spanning trees, too many for the LP; use --method mwu or raise --cap"
                )),
                e => e.into(),
            })?;
            info!("LP over {} spanning trees", trees.len());
            let game = build_game(&g, &trees, metric)?;
            let solution = lp_minimax(game.payoffs())?;
            debug!("primal {} dual {} gap {:e}", solution.value, solution.dual_value, solution.gap());
            let pm = distribution_from_solution(&game, &solution)?;
            let mut output = io::format_solver_report(&[], solution.value, 0.0, &pm);
            writeln!(output, "# trees {}", trees.len()).unwrap();
            writeln!(output, "# dual_value {}", num(solution.dual_value)).unwrap();
            Ok(Run { output, passed: true })
        }
        Method::Mwu => {
            let oracle = ConfiguredOracle::new(config.oracle())?;
            let mut player: Box<dyn GameOracle> = match metric {
                Metric::Stretch => Box::new(StretchPlayer(oracle)),
                Metric::Congestion => Box::new(congestion_oracle_from_stretch(oracle, &g.capacities())),
            };
            let outcome = mwu_solve(&g, player.as_mut(), config.mwu())?;
            info!("{} rounds at eta {}", outcome.deltas.len(), outcome.eta);
            let passed = outcome.guarantee_holds();
            let pm = if config.prune {
                prune_support(&outcome.distribution, metric, &g)?
            } else {
                outcome.distribution.clone()
            };
            let value = overall(&pm, &g, metric)?;
            let mut output = io::format_solver_report(&outcome.deltas, value, outcome.regret_bound, &pm);
            writeln!(output, "# mean_delta {}", num(outcome.mean_delta())).unwrap();
            writeln!(output, "# max_average_payoff {}", num(outcome.max_average_payoff())).unwrap();
            writeln!(output, "# regret_inequality {}", verdict(passed)).unwrap();
            Ok(Run { output, passed })
        }
    }
}

pub fn cmd_bisect(config: &RunConfig) -> Result<Run> {
    let g = config.graph()?;
    let params = BisectionParams {
        method: match config.method {
            None => SolveMethod::Auto,
            Some(Method::Lp) => SolveMethod::Lp,
            Some(Method::Mwu) => SolveMethod::Mwu,
        },
        lp_cap: config.cap,
        mwu: config.mwu(),
        oracle: config.oracle(),
        prune: config.prune,
    };
    let outcome = min_bisection_approx(&g, &params)?;
    info!(
        "{:?} distribution over {} trees, certificate {}",
        outcome.method,
        outcome.per_tree.len(),
        outcome.certificate
    );
    let best = &outcome.best;
    let ones = best.side_of.iter().filter(|&&s| s == 1).count();
    let passed = 2 * ones == g.n_vertices() && best.width.is_finite();
    let mut output = io::format_bisection(best.width, outcome.certificate, &best.side_of);
    for (i, r) in outcome.per_tree.iter().enumerate() {
        writeln!(
            output,
            "# tree {i} weight {} tree_width {} width {}",
            r.weight,
            num(r.tree_width),
            num(r.bisection.width)
        )
        .unwrap();
    }
    Ok(Run { output, passed })
}

pub fn cmd_dual(config: &RunConfig) -> Result<Run> {
    let g = config.graph()?;
    let rot_path = config.rotation.as_ref().ok_or_else(|| CliError::Usage("--rotation is required".into()))?;
    let rot = io::parse_rotation(&io::read_file(rot_path)?, &g)?;
    let dual = build_dual(&g, &rot)?;
    let mut output = String::new();
    let euler = g.n_vertices() + dual.graph.n_vertices() == g.n_edges() + 2;
    let involutive = dual_is_involutive(&g, &dual)?;
    writeln!(output, "faces {} euler {}", dual.graph.n_vertices(), verdict(euler)).unwrap();
    writeln!(output, "involution {}", verdict(involutive)).unwrap();
    let mut passed = euler && involutive;

    let supplied = match &config.distribution {
        Some(path) => Some(io::parse_distribution(&io::read_file(path)?, &g)?),
        None => None,
    };
    let trees = match &supplied {
        Some(pm) => pm.support().iter().map(|(t, _)| t.clone()).collect(),
        None => enumerate_spanning_trees(&g, config.cap)?,
    };
    info!("checking {} spanning trees", trees.len());
    for t in &trees {
        let report = check_duality(&g, &dual, t)?;
        write!(output, "tree").unwrap();
        for id in t.edges() {
            write!(output, " {id}").unwrap();
        }
        writeln!(output, " {}", verdict(report.passes())).unwrap();
        for d in &report.edges {
            writeln!(
                output,
                "edge {} {} {} {} {} {} {}",
                d.edge,
                if d.in_tree { "tree" } else { "nontree" },
                num(d.stretch),
                num(d.dual_congestion),
                num(d.congestion),
                num(d.dual_stretch),
                verdict(d.holds())
            )
            .unwrap();
        }
        passed &= report.passes();
    }
    if let Some(pm) = &supplied {
        let c = check_corollary(&g, &dual, pm)?;
        writeln!(
            output,
            "corollary {} {} {} {} {}",
            num(c.primal_stretch),
            num(c.dual_congestion),
            num(c.primal_congestion),
            num(c.dual_stretch),
            verdict(c.holds())
        )
        .unwrap();
        passed &= c.holds();
    }
    writeln!(output, "result {}", verdict(passed)).unwrap();
    Ok(Run { output, passed })
}

pub fn cmd_paper(config: &RunConfig) -> Result<Run> {
    let pg = PathsGraph::with_path_edges(config.n)?;
    let g = &pg.graph;
    let mut output = String::new();
    writeln!(output, "paths n {} k {} vertices {} edges {}", config.n, pg.k, g.n_vertices(), g.n_edges()).unwrap();

    let stretch = pg.stretch_construction_profile().overall;
    let ok = stretch <= 3.0 + BOUND_SLACK;
    writeln!(output, "stretch_construction {} {}", num(stretch), verdict(ok)).unwrap();
    let mut passed = ok;

    let pm = pg.congestion_construction()?;
    let congestion = prob_congestion(&pm, g, &g.capacities())?.overall;
    let ok = congestion <= 3.0 + BOUND_SLACK;
    writeln!(output, "congestion_construction {} {}", num(congestion), verdict(ok)).unwrap();
    passed &= ok;

    match enumerate_spanning_trees(g, config.cap) {
        Ok(trees) => {
            if config.n == 16 {
                let solution = lp_joint_minimax(&build_stretch_game(g, &trees)?, &build_congestion_game(g, &trees)?)?;
                let bound = pg.k as f64 / 2.0;
                let ok = solution.value >= bound - BOUND_SLACK;
                writeln!(output, "joint_lp {} bound {} {}", num(solution.value), num(bound), verdict(ok)).unwrap();
                passed &= ok;
            }
            let with = trees.iter().filter(|t| t.contains(pg.st_edge)).count();
            let ok = 2 * with == trees.len();
            writeln!(output, "st_membership {with} {} {}", trees.len(), verdict(ok)).unwrap();
            passed &= ok;
        }
        Err(treemap_core::Error::EnumerationOverflow { cap }) => {
            writeln!(output, "# more than {cap} spanning trees; joint LP and membership skipped").unwrap();
        }
        Err(e) => return Err(e.into()),
    }
    writeln!(output, "result {}", verdict(passed)).unwrap();
    Ok(Run { output, passed })
}
