//! Batch experiment harness: (game x solver x seed) grids with periodic
//! exploitability snapshots, CSV emission with 90% confidence bands, and
//! seeded head-to-head matches.
//!
//! Reproducibility: a run's trajectories are fully determined by the config
//! and master seed; per-trial streams derive from (master seed, trial) so
//! solvers compared on the same trial share a seed (paired trials) and trial
//! execution order is irrelevant. Wall time covers solving only (evaluation
//! excluded) and is recorded as 0 unless timing is enabled, keeping default
//! outputs byte-reproducible.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rayon::prelude::*;

use crate::checkpoint;
use crate::error::{Error, Result};
use crate::game::{Game, NodeKind, StrategyProfile};
use crate::games::{parse_selector, GameChoice};
use crate::matrix::{MatrixAlgo, SelfPlay};
use crate::metrics::exploitability_capped;
use crate::rng::{derive_seed, SolverRng};
use crate::solver::{Algorithm, SolverConfig, SolverState, WeightScheme};

/// A solver named on the command line: either a tree-game algorithm or one
/// of the matrix-game learners.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlgoSpec {
    Tree(Algorithm),
    Matrix(MatrixAlgo),
}

impl AlgoSpec {
    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rm" => Ok(AlgoSpec::Matrix(MatrixAlgo::RegretMatching)),
            "fp" => Ok(AlgoSpec::Matrix(MatrixAlgo::FictitiousPlay)),
            other => Ok(AlgoSpec::Tree(Algorithm::parse(other)?)),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            AlgoSpec::Tree(a) => a.name(),
            AlgoSpec::Matrix(m) => m.name(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Budget {
    Iterations(u64),
    Nodes(u64),
    Millis(u64),
}

impl Budget {
    /// Parse `iters=V`, `nodes=V`, or `ms=V`.
    pub fn parse(s: &str) -> Result<Self> {
        let (kind, v) = s
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("budget must be kind=value, got '{s}'")))?;
        let v: u64 = v.parse().map_err(|e| Error::Config(format!("bad budget value: {e}")))?;
        if v == 0 {
            return Err(Error::Config("budget must be positive".into()));
        }
        match kind {
            "iters" | "iterations" => Ok(Budget::Iterations(v)),
            "nodes" => Ok(Budget::Nodes(v)),
            "ms" | "millis" => Ok(Budget::Millis(v)),
            other => Err(Error::Config(format!("unknown budget kind: {other}"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolverSpec {
    pub algo: AlgoSpec,
    pub weight: WeightScheme,
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub game: String,
    pub solvers: Vec<SolverSpec>,
    pub trials: u32,
    pub budget: Budget,
    /// Snapshot cadence, in the budget's unit (iterations for iteration and
    /// millisecond budgets, nodes for node budgets).
    pub cadence: u64,
    pub master_seed: u64,
    pub out_dir: Option<PathBuf>,
    /// Record real wall time per snapshot. Off by default: timing makes the
    /// elapsed_ns column non-reproducible.
    pub timing: bool,
    pub tree_cap: u64,
}

impl ExperimentConfig {
    pub fn new(game: &str, budget: Budget, cadence: u64) -> Self {
        ExperimentConfig {
            game: game.to_string(),
            solvers: Vec::new(),
            trials: 30,
            budget,
            cadence,
            master_seed: 0,
            out_dir: None,
            timing: false,
            tree_cap: crate::game::DEFAULT_TREE_CAP,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials < 1 {
            return Err(Error::Config("trials >= 1 required".into()));
        }
        if self.cadence == 0 {
            return Err(Error::Config("cadence must be positive".into()));
        }
        if self.solvers.is_empty() {
            return Err(Error::Config("at least one solver required".into()));
        }
        parse_selector(&self.game)?;
        Ok(())
    }
}

/// One exploitability snapshot.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotRow {
    pub iteration: u64,
    pub nodes_touched: u64,
    pub elapsed_ns: u64,
    pub exploitability: f64,
}

/// Time series for one (solver, trial) run.
#[derive(Debug, Clone)]
pub struct RunRecord {
    pub algo: String,
    pub trial: u32,
    pub seed: u64,
    pub rows: Vec<SnapshotRow>,
}

fn run_tree_trial(
    choice: &GameChoice,
    spec: &SolverSpec,
    algo: Algorithm,
    trial: u32,
    cfg: &ExperimentConfig,
) -> Result<RunRecord> {
    let game = choice.build_tree(trial)?;
    let seed = derive_seed(cfg.master_seed, trial as u64);
    let solver_cfg = SolverConfig {
        algorithm: algo,
        weight: spec.weight,
        prune: true,
        prune_threshold: 1e-20,
        seed,
        tree_cap: cfg.tree_cap,
    };
    let mut solver = SolverState::new(&game, solver_cfg)?;
    let mut rows = Vec::new();
    let mut elapsed_ns: u64 = 0;
    let mut next_mark = cfg.cadence;
    let deadline_ms = match cfg.budget {
        Budget::Millis(ms) => Some(ms),
        _ => None,
    };
    loop {
        let start = Instant::now();
        solver.iterate(&game)?;
        elapsed_ns += start.elapsed().as_nanos() as u64;

        let t = solver.iteration();
        let nodes = solver.nodes_touched();
        let due = match cfg.budget {
            Budget::Iterations(_) | Budget::Millis(_) => t >= next_mark,
            Budget::Nodes(_) => nodes >= next_mark,
        };
        let done = match cfg.budget {
            Budget::Iterations(n) => t >= n,
            Budget::Nodes(n) => nodes >= n,
            Budget::Millis(ms) => elapsed_ns / 1_000_000 >= ms,
        };
        if due || done {
            while next_mark
                <= match cfg.budget {
                    Budget::Nodes(_) => nodes,
                    _ => t,
                }
            {
                next_mark += cfg.cadence;
            }
            let profile = solver.average_profile();
            let e = exploitability_capped(&game, &profile, cfg.tree_cap)?;
            rows.push(SnapshotRow {
                iteration: t,
                nodes_touched: nodes,
                elapsed_ns: if cfg.timing { elapsed_ns } else { 0 },
                exploitability: e.total,
            });
        }
        if done {
            break;
        }
        let _ = deadline_ms;
    }
    Ok(RunRecord { algo: spec.algo.name().to_string(), trial, seed, rows })
}

fn run_matrix_trial(
    choice: &GameChoice,
    spec: &SolverSpec,
    algo: MatrixAlgo,
    trial: u32,
    cfg: &ExperimentConfig,
) -> Result<RunRecord> {
    let game = choice.build_matrix(trial)?;
    let seed = derive_seed(cfg.master_seed, trial as u64);
    let mut sp = SelfPlay::new(game, algo, seed);
    let mut rows = Vec::new();
    let mut elapsed_ns: u64 = 0;
    let mut t: u64 = 0;
    loop {
        let start = Instant::now();
        sp.step();
        elapsed_ns += start.elapsed().as_nanos() as u64;
        t += 1;
        let done = match cfg.budget {
            Budget::Iterations(n) => t >= n,
            Budget::Nodes(n) => t >= n, // matrix learners have no tree nodes
            Budget::Millis(ms) => elapsed_ns / 1_000_000 >= ms,
        };
        if t % cfg.cadence == 0 || done {
            let e = sp.exploitability();
            rows.push(SnapshotRow {
                iteration: t,
                nodes_touched: 0,
                elapsed_ns: if cfg.timing { elapsed_ns } else { 0 },
                exploitability: e.total,
            });
        }
        if done {
            break;
        }
    }
    Ok(RunRecord { algo: spec.algo.name().to_string(), trial, seed, rows })
}

/// Experiment output: all run records plus rendered CSV artifacts.
#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub records: Vec<RunRecord>,
    pub results_csv: String,
    pub plotdata_csv: String,
    pub summary_csv: String,
}

/// Run the (solver x trial) grid. Trials run in parallel; output order is
/// deterministic.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    cfg.validate()?;
    let choice = parse_selector(&cfg.game)?;
    if !choice.is_matrix() {
        for s in &cfg.solvers {
            if matches!(s.algo, AlgoSpec::Matrix(_)) {
                return Err(Error::Config(format!(
                    "matrix learner '{}' cannot run on tree game '{}'",
                    s.algo.name(),
                    cfg.game
                )));
            }
        }
    }
    let jobs: Vec<(usize, u32)> = (0..cfg.solvers.len())
        .flat_map(|s| (0..cfg.trials).map(move |t| (s, t)))
        .collect();
    let mut records: Vec<(usize, RunRecord)> = jobs
        .par_iter()
        .map(|&(si, trial)| {
            let spec = &cfg.solvers[si];
            let rec = match spec.algo {
                AlgoSpec::Tree(a) => run_tree_trial(&choice, spec, a, trial, cfg),
                AlgoSpec::Matrix(m) => run_matrix_trial(&choice, spec, m, trial, cfg),
            };
            rec.map(|r| (si, r))
        })
        .collect::<Result<Vec<_>>>()?;
    records.sort_by_key(|(si, r)| (*si, r.trial));
    let records: Vec<RunRecord> = records.into_iter().map(|(_, r)| r).collect();

    let results_csv = results_csv(&records)?;
    let plotdata_csv = emit_plotdata(&cfg.game, &records)?;
    let summary_csv = summary_csv(cfg, &records)?;

    if let Some(dir) = &cfg.out_dir {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("results.csv"), &results_csv)?;
        std::fs::write(dir.join("plotdata.csv"), &plotdata_csv)?;
        std::fs::write(dir.join("summary.csv"), &summary_csv)?;
        // keep a resumable checkpoint of each tree solver's first trial
        for spec in &cfg.solvers {
            if let AlgoSpec::Tree(a) = spec.algo {
                let game = choice.build_tree(0)?;
                let mut solver = SolverState::new(
                    &game,
                    SolverConfig {
                        algorithm: a,
                        weight: spec.weight,
                        prune: true,
                        prune_threshold: 1e-20,
                        seed: derive_seed(cfg.master_seed, 0),
                        tree_cap: cfg.tree_cap,
                    },
                )?;
                match cfg.budget {
                    Budget::Iterations(n) => solver.run(&game, n)?,
                    Budget::Nodes(n) => solver.run_until_nodes(&game, n)?,
                    Budget::Millis(_) => {
                        // time budgets are not reproducible; keep a fixed
                        // small iteration count for the artifact
                        solver.run(&game, 1000)?;
                    }
                }
                checkpoint::save(&solver, &cfg.game, &dir.join(format!("{}.ckpt", a.name())))?;
            }
        }
    }
    Ok(ExperimentOutput { records, results_csv, plotdata_csv, summary_csv })
}

fn results_csv(records: &[RunRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["trial", "iter", "algo", "exploitability", "elapsed_ns"])
        .map_err(csv_err)?;
    for r in records {
        for row in &r.rows {
            w.write_record([
                r.trial.to_string(),
                row.iteration.to_string(),
                r.algo.clone(),
                fmt_f64(row.exploitability),
                row.elapsed_ns.to_string(),
            ])
            .map_err(csv_err)?;
        }
    }
    finish_csv(w)
}

/// Long-format plot data: one row per snapshot per x-axis kind.
pub fn emit_plotdata(game: &str, records: &[RunRecord]) -> Result<String> {
    if records.is_empty() || records.iter().all(|r| r.rows.is_empty()) {
        return Err(Error::Config("no snapshots to emit".into()));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["game", "solver", "trial", "x_kind", "x", "exploitability"])
        .map_err(csv_err)?;
    for r in records {
        for row in &r.rows {
            for (kind, x) in [
                ("iteration", row.iteration),
                ("nodes", row.nodes_touched),
                ("time", row.elapsed_ns),
            ] {
                w.write_record([
                    game.to_string(),
                    r.algo.clone(),
                    r.trial.to_string(),
                    kind.to_string(),
                    x.to_string(),
                    fmt_f64(row.exploitability),
                ])
                .map_err(csv_err)?;
            }
        }
    }
    finish_csv(w)
}

/// Mean and normal-approximation 90% confidence interval.
pub fn normal_ci90(samples: &[f64]) -> (f64, f64, f64) {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    if samples.len() < 2 {
        return (mean, mean, mean);
    }
    let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    let half = 1.645 * (var / n).sqrt();
    (mean, mean - half, mean + half)
}

/// Percentile-bootstrap 90% interval (seeded), as an alternative to the
/// normal approximation.
pub fn bootstrap_ci90(samples: &[f64], resamples: u32, seed: u64) -> (f64, f64, f64) {
    let n = samples.len();
    let mean = samples.iter().sum::<f64>() / n as f64;
    if n < 2 {
        return (mean, mean, mean);
    }
    let mut rng = SolverRng::seed_from_u64(seed);
    let mut means: Vec<f64> = (0..resamples)
        .map(|_| (0..n).map(|_| samples[rng.gen_range(0..n)]).sum::<f64>() / n as f64)
        .collect();
    means.sort_by(|a, b| a.total_cmp(b));
    let lo = means[((resamples as f64) * 0.05) as usize];
    let hi = means[(((resamples as f64) * 0.95) as usize).min(resamples as usize - 1)];
    (mean, lo, hi)
}

fn summary_csv(cfg: &ExperimentConfig, records: &[RunRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "solver", "snapshot", "x_kind", "x_mean", "exploitability_mean", "ci_lo", "ci_hi",
        "trials",
    ])
    .map_err(csv_err)?;
    let x_kind = match cfg.budget {
        Budget::Nodes(_) => "nodes",
        _ => "iteration",
    };
    for spec in &cfg.solvers {
        let name = spec.algo.name();
        let runs: Vec<&RunRecord> = records.iter().filter(|r| r.algo == name).collect();
        if runs.is_empty() {
            continue;
        }
        let snapshots = runs.iter().map(|r| r.rows.len()).min().unwrap_or(0);
        for s in 0..snapshots {
            let xs: Vec<f64> = runs
                .iter()
                .map(|r| match cfg.budget {
                    Budget::Nodes(_) => r.rows[s].nodes_touched as f64,
                    _ => r.rows[s].iteration as f64,
                })
                .collect();
            let es: Vec<f64> = runs.iter().map(|r| r.rows[s].exploitability).collect();
            let (mean, lo, hi) = normal_ci90(&es);
            let x_mean = xs.iter().sum::<f64>() / xs.len() as f64;
            w.write_record([
                name.to_string(),
                s.to_string(),
                x_kind.to_string(),
                fmt_f64(x_mean),
                fmt_f64(mean),
                fmt_f64(lo),
                fmt_f64(hi),
                runs.len().to_string(),
            ])
            .map_err(csv_err)?;
        }
    }
    finish_csv(w)
}

fn fmt_f64(x: f64) -> String {
    format!("{x}")
}

fn csv_err(e: csv::Error) -> Error {
    Error::Config(format!("csv: {e}"))
}

fn finish_csv(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::Config(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::Config(format!("csv utf8: {e}")))
}

/// Head-to-head evaluation per the two-competition seat protocol: in
/// competition 1 a random seat plays profile A and the rest play B (r1 is
/// A's mean payoff); competition 2 swaps the roles.
#[derive(Debug, Clone)]
pub struct MatchConfig {
    pub game: String,
    pub profile_a: StrategyProfile,
    pub profile_b: StrategyProfile,
    pub episodes: u64,
    pub seed: u64,
    pub payoff_unit: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchResult {
    pub r1_mean: f64,
    pub r1_se: f64,
    pub r2_mean: f64,
    pub r2_se: f64,
    pub episodes: u64,
}

pub fn run_match(cfg: &MatchConfig) -> Result<MatchResult> {
    if cfg.episodes < 1 {
        return Err(Error::Config("episodes >= 1 required".into()));
    }
    let choice = parse_selector(&cfg.game)?;
    let game = choice.build_tree(0)?;
    let (r1_mean, r1_se) = competition(
        &game,
        &cfg.profile_a,
        &cfg.profile_b,
        cfg.episodes,
        derive_seed(cfg.seed, 1),
    );
    let (r2_mean, r2_se) = competition(
        &game,
        &cfg.profile_b,
        &cfg.profile_a,
        cfg.episodes,
        derive_seed(cfg.seed, 2),
    );
    Ok(MatchResult { r1_mean, r1_se, r2_mean, r2_se, episodes: cfg.episodes })
}

/// Play episodes with `minority` in one random seat and `majority` in the
/// rest; returns the minority seat's mean payoff and standard error.
fn competition<G: Game>(
    game: &G,
    minority: &StrategyProfile,
    majority: &StrategyProfile,
    episodes: u64,
    seed: u64,
) -> (f64, f64) {
    let n = game.num_players();
    let mut rng = SolverRng::seed_from_u64(seed);
    let mut sum = 0.0;
    let mut sumsq = 0.0;
    for _ in 0..episodes {
        let seat = rng.gen_range(0..n);
        let mut state = game.root();
        loop {
            match game.kind(&state) {
                NodeKind::Terminal => {
                    let u = game.payoffs(&state)[seat];
                    sum += u;
                    sumsq += u * u;
                    break;
                }
                NodeKind::Chance => {
                    let probs = game.chance_probs(&state);
                    let a = sample_index(&mut rng, &probs);
                    state = game.apply(&state, a);
                }
                NodeKind::Decision(p) => {
                    let key = game.infoset_key(&state);
                    let na = game.num_actions(&state);
                    let profile = if p.0 == seat { minority } else { majority };
                    let policy = profile.policy_or_uniform(p, &key, na);
                    let a = sample_index(&mut rng, policy.probs());
                    state = game.apply(&state, a);
                }
            }
        }
    }
    let n = episodes as f64;
    let mean = sum / n;
    let var = (sumsq / n - mean * mean).max(0.0);
    let se = if episodes > 1 { (var / (n - 1.0)).sqrt() } else { 0.0 };
    (mean, se)
}

fn sample_index(rng: &mut SolverRng, probs: &[f64]) -> usize {
    let x: f64 = rng.gen();
    let mut acc = 0.0;
    for (i, &p) in probs.iter().enumerate() {
        acc += p;
        if x < acc {
            return i;
        }
    }
    probs.len() - 1
}

/// Flat key-value experiment config files with per-solver sections:
///
/// ```text
/// # comment
/// game = kuhn:x=3,y=1,z=1
/// trials = 30
/// budget = iters=10000
/// cadence = 1000
/// seed = 42
/// timing = false
///
/// [solver cfr]
/// weight = constant
/// ```
pub fn parse_config_file(text: &str) -> Result<ExperimentConfig> {
    let mut game = None;
    let mut trials: u32 = 30;
    let mut budget = None;
    let mut cadence: u64 = 0;
    let mut seed: u64 = 0;
    let mut timing = false;
    let mut out_dir = None;
    let mut solvers: Vec<SolverSpec> = Vec::new();
    let mut in_solver: Option<usize> = None;

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(section) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            let name = section
                .strip_prefix("solver ")
                .ok_or_else(|| Error::Config(format!("line {}: bad section", lineno + 1)))?;
            solvers.push(SolverSpec {
                algo: AlgoSpec::parse(name.trim())?,
                weight: WeightScheme::Constant,
            });
            in_solver = Some(solvers.len() - 1);
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected key = value", lineno + 1)))?;
        let (k, v) = (k.trim(), v.trim());
        match in_solver {
            Some(i) => match k {
                "weight" => solvers[i].weight = WeightScheme::parse(v)?,
                other => {
                    return Err(Error::Config(format!("line {}: unknown solver key {other}", lineno + 1)))
                }
            },
            None => match k {
                "game" => game = Some(v.to_string()),
                "trials" => {
                    trials = v.parse().map_err(|e| Error::Config(format!("trials: {e}")))?
                }
                "budget" => budget = Some(Budget::parse(v)?),
                "cadence" => {
                    cadence = v.parse().map_err(|e| Error::Config(format!("cadence: {e}")))?
                }
                "seed" => seed = v.parse().map_err(|e| Error::Config(format!("seed: {e}")))?,
                "timing" => {
                    timing = v.parse().map_err(|e| Error::Config(format!("timing: {e}")))?
                }
                "out" => out_dir = Some(PathBuf::from(v)),
                other => {
                    return Err(Error::Config(format!("line {}: unknown key {other}", lineno + 1)))
                }
            },
        }
    }
    let mut cfg = ExperimentConfig::new(
        &game.ok_or_else(|| Error::Config("config missing 'game'".into()))?,
        budget.ok_or_else(|| Error::Config("config missing 'budget'".into()))?,
        if cadence == 0 { 1 } else { cadence },
    );
    cfg.trials = trials;
    cfg.master_seed = seed;
    cfg.timing = timing;
    cfg.out_dir = out_dir;
    cfg.solvers = solvers;
    Ok(cfg)
}

/// Render a human-readable summary of an experiment for stdout.
pub fn render_summary(cfg: &ExperimentConfig, out: &ExperimentOutput) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "game: {}", cfg.game);
    for spec in &cfg.solvers {
        let name = spec.algo.name();
        let finals: Vec<f64> = out
            .records
            .iter()
            .filter(|r| r.algo == name)
            .filter_map(|r| r.rows.last().map(|row| row.exploitability))
            .collect();
        if finals.is_empty() {
            continue;
        }
        let (mean, lo, hi) = normal_ci90(&finals);
        let _ = writeln!(
            s,
            "{name}: final exploitability mean {mean:.6e} (90% CI [{lo:.6e}, {hi:.6e}], {} trials)",
            finals.len()
        );
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn smoke_config(algos: &[&str]) -> ExperimentConfig {
        let mut cfg = ExperimentConfig::new("kuhn:x=3,y=1,z=1", Budget::Iterations(100), 10);
        cfg.trials = 1;
        cfg.master_seed = 7;
        for a in algos {
            cfg.solvers.push(SolverSpec { algo: AlgoSpec::parse(a).unwrap(), weight: WeightScheme::Constant });
        }
        cfg
    }

    #[test]
    fn smoke_run_has_snapshots_and_decreasing_trend() {
        let cfg = smoke_config(&["cfr"]);
        let out = run_experiment(&cfg).unwrap();
        assert_eq!(out.records.len(), 1);
        let rows = &out.records[0].rows;
        assert_eq!(rows.len(), 10);
        assert!(rows.last().unwrap().exploitability < rows.first().unwrap().exploitability);
        assert!(rows.windows(2).all(|w| w[0].iteration < w[1].iteration));
        assert!(rows.windows(2).all(|w| w[0].nodes_touched <= w[1].nodes_touched));
    }

    #[test]
    fn reruns_are_byte_identical() {
        let cfg = smoke_config(&["cfvfp", "mccfvfp"]);
        let a = run_experiment(&cfg).unwrap();
        let b = run_experiment(&cfg).unwrap();
        assert_eq!(a.results_csv, b.results_csv);
        assert_eq!(a.plotdata_csv, b.plotdata_csv);
        assert_eq!(a.summary_csv, b.summary_csv);
    }

    #[test]
    fn plotdata_row_arithmetic() {
        let cfg = smoke_config(&["cfr"]);
        let out = run_experiment(&cfg).unwrap();
        // 1 trial x 10 snapshots x 3 axis kinds + header
        assert_eq!(out.plotdata_csv.lines().count(), 1 + 30);
        assert!(emit_plotdata("g", &[]).is_err());
    }

    #[test]
    fn matrix_algo_on_tree_game_is_config_error() {
        let cfg = smoke_config(&["rm"]);
        assert!(matches!(run_experiment(&cfg), Err(Error::Config(_))));
    }

    #[test]
    fn ci_coverage_on_synthetic_process() {
        // 90% normal CI over n=30 samples should cover the true mean in
        // roughly 85-95% of resamples.
        let mut rng = SolverRng::seed_from_u64(123);
        let mut covered = 0;
        let total = 1000;
        for _ in 0..total {
            let samples: Vec<f64> = (0..30)
                .map(|_| {
                    let u: f64 = rng.gen();
                    let v: f64 = rng.gen();
                    // Box-Muller, mean 3, sd 2
                    3.0 + 2.0
                        * (-2.0 * u.max(1e-12).ln()).sqrt()
                        * (2.0 * std::f64::consts::PI * v).cos()
                })
                .collect();
            let (_, lo, hi) = normal_ci90(&samples);
            if lo <= 3.0 && 3.0 <= hi {
                covered += 1;
            }
        }
        let frac = covered as f64 / total as f64;
        assert!((0.85..=0.95).contains(&frac), "coverage {frac}");
    }

    #[test]
    fn match_null_test_and_determinism() {
        // identical profiles in a symmetric game: r1 - r2 within 3 SEs of 0
        let uniform = StrategyProfile::new(2);
        let cfg = MatchConfig {
            game: "rps-lr".into(),
            profile_a: uniform.clone(),
            profile_b: uniform,
            episodes: 4000,
            seed: 5,
            payoff_unit: "points".into(),
        };
        let r = run_match(&cfg).unwrap();
        let se = (r.r1_se * r.r1_se + r.r2_se * r.r2_se).sqrt();
        assert!((r.r1_mean - r.r2_mean).abs() <= 3.0 * se + 1e-12);
        let r2 = run_match(&cfg).unwrap();
        assert_eq!(r.r1_mean, r2.r1_mean);
        assert_eq!(r.r2_mean, r2.r2_mean);
    }

    #[test]
    fn config_file_round_trip() {
        let text = "\
# demo
game = kuhn:x=3,y=1,z=1
trials = 3
budget = iters=50
cadence = 10
seed = 9
timing = false

[solver cfr]
weight = linear

[solver mccfvfp]
";
        let cfg = parse_config_file(text).unwrap();
        assert_eq!(cfg.game, "kuhn:x=3,y=1,z=1");
        assert_eq!(cfg.trials, 3);
        assert_eq!(cfg.budget, Budget::Iterations(50));
        assert_eq!(cfg.solvers.len(), 2);
        assert_eq!(cfg.solvers[0].weight, WeightScheme::Linear);
        assert!(parse_config_file("budget = iters=10").is_err());
        assert!(parse_config_file("game = kuhn:x=3\nbudget = bogus").is_err());
    }

    #[test]
    fn paired_trials_share_seeds_across_solvers() {
        let cfg = {
            let mut c = smoke_config(&["mccfr-es", "mccfvfp"]);
            c.trials = 2;
            c
        };
        let out = run_experiment(&cfg).unwrap();
        let seeds: Vec<(String, u32, u64)> =
            out.records.iter().map(|r| (r.algo.clone(), r.trial, r.seed)).collect();
        let es0 = seeds.iter().find(|(a, t, _)| a == "mccfr-es" && *t == 0).unwrap().2;
        let mv0 = seeds.iter().find(|(a, t, _)| a == "mccfvfp" && *t == 0).unwrap().2;
        assert_eq!(es0, mv0);
        let es1 = seeds.iter().find(|(a, t, _)| a == "mccfr-es" && *t == 1).unwrap().2;
        assert_ne!(es0, es1);
    }
}
