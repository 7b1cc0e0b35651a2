use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cfvfp::error::Error;
use cfvfp::game::{enumerate_tree_capped, StrategyProfile};
use cfvfp::games::parse_selector;
use cfvfp::harness::{
    parse_config_file, render_summary, run_experiment, run_match, AlgoSpec, Budget,
    ExperimentConfig, MatchConfig, SolverSpec,
};
use cfvfp::metrics::predict_census;
use cfvfp::solver::WeightScheme;
use cfvfp::{checkpoint, PlayerId};

#[derive(Parser)]
#[command(name = "cfvfp", about = "Equilibrium solvers and benchmarks for imperfect-information games", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a (game x solver x trial) convergence experiment.
    Solve(SolveArgs),
    /// Head-to-head evaluation of two strategy profiles.
    Match(MatchArgs),
    /// Exact node and infoset census of a game.
    Census(CensusArgs),
    /// Node-color census prediction for the complete alternating tree.
    PredictCensus(PredictArgs),
}

#[derive(Args)]
struct SolveArgs {
    /// Game selector, e.g. kuhn:x=3,y=1,z=1 | leduc:x=3,y=1,z=1 |
    /// pam:rounds=4 | rps-lr | randmat:n=100,m=100,boost=5,rows=10,seed=1
    #[arg(long)]
    game: Option<String>,
    /// Solver name (repeatable): cfr, cfr+, cfvfp, cfvfp+, mccfr-es,
    /// mccfvfp, mccfvfp+, rm, fp
    #[arg(long = "algo")]
    algos: Vec<String>,
    /// Averaging weight per solver (repeatable; constant|log|linear|quadratic)
    #[arg(long = "weight")]
    weights: Vec<String>,
    #[arg(long, default_value_t = 30)]
    trials: u32,
    /// Budget: iters=V, nodes=V, or ms=V
    #[arg(long)]
    budget: Option<String>,
    /// Snapshot cadence in the budget's unit
    #[arg(long)]
    cadence: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory for results.csv, plotdata.csv, summary.csv and
    /// per-solver checkpoints
    #[arg(long)]
    out: Option<PathBuf>,
    /// Record wall-clock time (makes the elapsed_ns column non-reproducible)
    #[arg(long, default_value_t = false)]
    timing: bool,
    /// Read a config file first; flags override its values
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct MatchArgs {
    #[arg(long)]
    game: String,
    /// Checkpoint file or "uniform"
    #[arg(long)]
    profile_a: String,
    #[arg(long)]
    profile_b: String,
    /// Must equal the game's player count
    #[arg(long, default_value_t = 2)]
    players: usize,
    #[arg(long, default_value_t = 10000)]
    episodes: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "chips")]
    payoff_unit: String,
}

#[derive(Args)]
struct CensusArgs {
    #[arg(long)]
    game: String,
    /// Traversal cap
    #[arg(long, default_value_t = cfvfp::game::DEFAULT_TREE_CAP)]
    cap: u64,
}

#[derive(Args)]
struct PredictArgs {
    /// Branching factor
    #[arg(long)]
    g: u64,
    /// Decision levels
    #[arg(long)]
    h: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Match(a) => cmd_match(a),
        Command::Census(a) => cmd_census(a),
        Command::PredictCensus(a) => cmd_predict(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config(_) | Error::InvalidParams(_) => ExitCode::from(2),
                _ => ExitCode::FAILURE,
            }
        }
    }
}

fn cmd_solve(a: SolveArgs) -> cfvfp::Result<()> {
    let mut cfg: ExperimentConfig = match &a.config {
        Some(path) => parse_config_file(&std::fs::read_to_string(path)?)?,
        None => {
            let game = a
                .game
                .clone()
                .ok_or_else(|| Error::Config("--game required (or use --config)".into()))?;
            let budget = Budget::parse(
                a.budget
                    .as_deref()
                    .ok_or_else(|| Error::Config("--budget required (or use --config)".into()))?,
            )?;
            ExperimentConfig::new(&game, budget, a.cadence.unwrap_or(1))
        }
    };
    if a.config.is_some() {
        if let Some(game) = &a.game {
            cfg.game = game.clone();
        }
        if let Some(b) = &a.budget {
            cfg.budget = Budget::parse(b)?;
        }
        if let Some(c) = a.cadence {
            cfg.cadence = c;
        }
    }
    if !a.algos.is_empty() {
        if !a.weights.is_empty() && a.weights.len() != a.algos.len() && a.weights.len() != 1 {
            return Err(Error::Config("--weight count must be 1 or match --algo count".into()));
        }
        cfg.solvers = a
            .algos
            .iter()
            .enumerate()
            .map(|(i, name)| {
                let weight = if a.weights.is_empty() {
                    WeightScheme::Constant
                } else if a.weights.len() == 1 {
                    WeightScheme::parse(&a.weights[0])?
                } else {
                    WeightScheme::parse(&a.weights[i])?
                };
                Ok(SolverSpec { algo: AlgoSpec::parse(name)?, weight })
            })
            .collect::<cfvfp::Result<Vec<_>>>()?;
    }
    if a.config.is_none() || a.trials != 30 {
        cfg.trials = a.trials;
    }
    if a.config.is_none() || a.seed != 0 {
        cfg.master_seed = a.seed;
    }
    if a.timing {
        cfg.timing = true;
    }
    if let Some(out) = a.out {
        cfg.out_dir = Some(out);
    }
    let out = run_experiment(&cfg)?;
    print!("{}", render_summary(&cfg, &out));
    if let Some(dir) = &cfg.out_dir {
        println!("wrote results.csv, plotdata.csv, summary.csv to {}", dir.display());
    }
    Ok(())
}

fn load_profile(game_sel: &str, spec: &str) -> cfvfp::Result<StrategyProfile> {
    if spec == "uniform" {
        return Ok(StrategyProfile::new(2));
    }
    let path = PathBuf::from(spec);
    let text = std::fs::read_to_string(&path)?;
    let header = checkpoint::read_header(&text)?;
    if header.game_selector != game_sel {
        return Err(Error::Config(format!(
            "profile {} was trained on '{}', not '{}'",
            path.display(),
            header.game_selector,
            game_sel
        )));
    }
    let game = parse_selector(game_sel)?.build_tree(0)?;
    let state = checkpoint::restore(&game, &text)?;
    Ok(state.average_profile())
}

fn cmd_match(a: MatchArgs) -> cfvfp::Result<()> {
    let choice = parse_selector(&a.game)?;
    let game = choice.build_tree(0)?;
    use cfvfp::game::Game;
    if a.players != game.num_players() {
        return Err(Error::Config(format!(
            "--players {} but game has {} players",
            a.players,
            game.num_players()
        )));
    }
    let cfg = MatchConfig {
        game: a.game.clone(),
        profile_a: load_profile(&a.game, &a.profile_a)?,
        profile_b: load_profile(&a.game, &a.profile_b)?,
        episodes: a.episodes,
        seed: a.seed,
        payoff_unit: a.payoff_unit.clone(),
    };
    let r = run_match(&cfg)?;
    println!("game: {}", a.game);
    println!("episodes per competition: {}", r.episodes);
    println!("r1 (A in minority seat): {:.6} +/- {:.6} {}", r.r1_mean, r.r1_se, a.payoff_unit);
    println!("r2 (B in minority seat): {:.6} +/- {:.6} {}", r.r2_mean, r.r2_se, a.payoff_unit);
    println!("r1 - r2: {:.6}", r.r1_mean - r.r2_mean);
    Ok(())
}

fn cmd_census(a: CensusArgs) -> cfvfp::Result<()> {
    let choice = parse_selector(&a.game)?;
    let game = choice.build_tree(0)?;
    let c = enumerate_tree_capped(&game, a.cap)?;
    println!("game: {}", a.game);
    println!("nodes: {}", c.total_nodes);
    println!("terminal nodes: {}", c.terminal_nodes);
    println!("chance nodes: {}", c.chance_nodes);
    for p in 0..c.infosets_per_player.len() {
        println!(
            "{}: decision nodes {} infosets {}",
            PlayerId(p),
            c.decision_nodes_per_player[p],
            c.infosets_per_player[p]
        );
    }
    println!("infosets: {}", c.total_infosets());
    Ok(())
}

fn cmd_predict(a: PredictArgs) -> cfvfp::Result<()> {
    let p = predict_census(a.g, a.h)?;
    println!("g={} h={}", p.branching, p.levels);
    println!("red: {}", p.red);
    println!("green: {}", p.green);
    println!("blue: {}", p.blue);
    println!("yellow: {}", p.yellow);
    println!("pass: {}", p.pass);
    println!("all: {}", p.all);
    Ok(())
}
