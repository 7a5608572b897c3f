use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use treemap::commands::{cmd_bisect, cmd_dual, cmd_paper, cmd_solve, Method, RunConfig};
use treemap::core::game::{LearningRate, Metric};
use treemap::io;

#[derive(Parser)]
#[command(name = "treemap", version, about = "Probabilistic mappings of graph edges into spanning trees")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Distribution over spanning trees minimizing stretch or congestion
    Solve,
    /// Approximate minimum bisection through a low-congestion distribution
    Bisect,
    /// Check primal/dual stretch and congestion identities of a planar embedding
    Dual,
    /// Rebuild the square-root-paths instance and its constructions
    Paper,
}

#[derive(ValueEnum, Clone, Copy)]
enum MetricArg {
    Stretch,
    Congestion,
}

#[derive(ValueEnum, Clone, Copy)]
enum MethodArg {
    Lp,
    Mwu,
}

#[derive(clap::Args)]
struct Flags {
    #[arg(long, global = true)]
    graph: Option<PathBuf>,
    #[arg(long, global = true)]
    rotation: Option<PathBuf>,
    /// Distribution file: trees to check in `dual`
    #[arg(long, global = true)]
    distribution: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "stretch")]
    metric: MetricArg,
    #[arg(long, global = true, value_enum)]
    method: Option<MethodArg>,
    #[arg(long, global = true, default_value_t = 1000)]
    rounds: usize,
    /// `auto` or a nonnegative number
    #[arg(long, global = true, default_value = "auto", value_parser = parse_eta)]
    eta: LearningRate,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest spanning-tree count to enumerate
    #[arg(long, global = true, default_value_t = 5000)]
    cap: usize,
    #[arg(long, global = true)]
    prune: bool,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Path edges of the paths instance, a perfect square
    #[arg(long, global = true, default_value_t = 16)]
    n: usize,
}

fn parse_eta(s: &str) -> Result<LearningRate, String> {
    if s == "auto" {
        return Ok(LearningRate::Auto);
    }
    match s.parse::<f64>() {
        Ok(x) if x >= 0.0 && x.is_finite() => Ok(LearningRate::Fixed(x)),
        _ => Err(format!("expected 'auto' or a nonnegative number, got '{s}'")),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("TREEMAP_LOG")).init();
    let cli = Cli::parse();
    let f = cli.flags;
    let config = RunConfig {
        graph: f.graph,
        rotation: f.rotation,
        distribution: f.distribution,
        metric: match f.metric {
            MetricArg::Stretch => Metric::Stretch,
            MetricArg::Congestion => Metric::Congestion,
        },
        method: f.method.map(|m| match m {
            MethodArg::Lp => Method::Lp,
            MethodArg::Mwu => Method::Mwu,
        }),
        rounds: f.rounds,
        eta: f.eta,
        seed: f.seed,
        cap: f.cap,
        prune: f.prune,
        n: f.n,
    };
    let result = match cli.command {
        Command::Solve => cmd_solve(&config),
        Command::Bisect => cmd_bisect(&config),
        Command::Dual => cmd_dual(&config),
        Command::Paper => cmd_paper(&config),
    };
    let run = match result {
        Ok(run) => run,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match &f.out {
        Some(path) => {
            if let Err(e) = io::write_file(path, &run.output) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        }
        None => print!("{}", run.output),
    }
    if run.passed {
        ExitCode::SUCCESS
    } else {
        eprintln!("error: internal checks failed");
        ExitCode::FAILURE
    }
}
