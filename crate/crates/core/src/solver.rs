//! The iterative equilibrium solvers.
//!
//! Full-traversal solvers (CFR, CFR+, CFVFP, CFVFP+) make one simultaneous
//! update pass per iteration over the whole tree. Monte Carlo solvers sample:
//! MCCFR-ES alternates the traversing player and samples chance and opponent
//! actions; MCCFVFP samples chance only and updates both players in a single
//! pass.
//!
//! The CFR family accumulates counterfactual regrets and plays the
//! regret-matching policy. The CFVFP family accumulates cumulative
//! counterfactual values Q(I,a) and plays the pure argmax action; since pure
//! play drives most reach probabilities to exactly zero, naive pruning skips
//! whole subtrees without changing any accumulator.
//!
//! Argmax ties keep the incumbent action when it is still maximal and draw
//! uniformly from the maximizer set otherwise. This keeps RNG streams aligned
//! between pruned and unpruned runs, which is what makes threshold-0 pruning
//! bit-exact against an unpruned reference.

use std::collections::HashMap;

use rand::Rng;
use rand::SeedableRng;

use crate::error::{Error, Result};
use crate::game::{Game, InfoSetKey, NodeKind, Policy, StrategyProfile, DEFAULT_TREE_CAP};
use crate::matrix::regret_match;
use crate::rng::{derive_seed, SolverRng};

/// The algorithm family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Cfr,
    CfrPlus,
    Cfvfp,
    CfvfpPlus,
    MccfrEs,
    Mccfvfp,
    MccfvfpPlus,
}

impl Algorithm {
    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cfr" => Ok(Algorithm::Cfr),
            "cfr+" | "cfrplus" => Ok(Algorithm::CfrPlus),
            "cfvfp" => Ok(Algorithm::Cfvfp),
            "cfvfp+" | "cfvfpplus" => Ok(Algorithm::CfvfpPlus),
            "mccfr-es" | "mccfr" | "es-mccfr" => Ok(Algorithm::MccfrEs),
            "mccfvfp" => Ok(Algorithm::Mccfvfp),
            "mccfvfp+" | "mccfvfpplus" => Ok(Algorithm::MccfvfpPlus),
            other => Err(Error::Config(format!("unknown algorithm: {other}"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Cfr => "cfr",
            Algorithm::CfrPlus => "cfr+",
            Algorithm::Cfvfp => "cfvfp",
            Algorithm::CfvfpPlus => "cfvfp+",
            Algorithm::MccfrEs => "mccfr-es",
            Algorithm::Mccfvfp => "mccfvfp",
            Algorithm::MccfvfpPlus => "mccfvfp+",
        }
    }

    /// Solvers that traverse the whole tree every iteration.
    pub fn is_full_traversal(&self) -> bool {
        matches!(
            self,
            Algorithm::Cfr | Algorithm::CfrPlus | Algorithm::Cfvfp | Algorithm::CfvfpPlus
        )
    }

    /// Solvers that play pure argmax policies (fictitious-play style).
    pub fn is_cfv_family(&self) -> bool {
        matches!(
            self,
            Algorithm::Cfvfp | Algorithm::CfvfpPlus | Algorithm::Mccfvfp | Algorithm::MccfvfpPlus
        )
    }

    pub fn is_plus(&self) -> bool {
        matches!(self, Algorithm::CfrPlus | Algorithm::CfvfpPlus | Algorithm::MccfvfpPlus)
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Iteration weight applied to average-strategy folds (all solvers) and to
/// the Q increments of the CFVFP family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WeightScheme {
    #[default]
    Constant,
    LogT,
    Linear,
    Quadratic,
}

impl WeightScheme {
    pub fn weight(&self, t: u64) -> f64 {
        match self {
            WeightScheme::Constant => 1.0,
            // ln(t) would zero out the first iteration; shift by one.
            WeightScheme::LogT => ((t + 1) as f64).ln(),
            WeightScheme::Linear => t as f64,
            WeightScheme::Quadratic => (t as f64) * (t as f64),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "constant" | "const" | "1" | "vanilla" => Ok(WeightScheme::Constant),
            "log" | "logt" => Ok(WeightScheme::LogT),
            "linear" | "t" => Ok(WeightScheme::Linear),
            "quadratic" | "t2" | "t^2" => Ok(WeightScheme::Quadratic),
            other => Err(Error::Config(format!("unknown weight scheme: {other}"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            WeightScheme::Constant => "constant",
            WeightScheme::LogT => "log",
            WeightScheme::Linear => "linear",
            WeightScheme::Quadratic => "quadratic",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub algorithm: Algorithm,
    pub weight: WeightScheme,
    /// Naive pruning: skip subtrees no player can reach, and subtrees whose
    /// reach product falls below `prune_threshold`.
    pub prune: bool,
    /// Engineering floor on the reach product; 0.0 means exact pruning only.
    pub prune_threshold: f64,
    pub seed: u64,
    /// Node cap enforced when a full-traversal solver is constructed.
    pub tree_cap: u64,
}

impl SolverConfig {
    pub fn new(algorithm: Algorithm) -> Self {
        SolverConfig {
            algorithm,
            weight: WeightScheme::Constant,
            prune: true,
            prune_threshold: 1e-20,
            seed: 0,
            tree_cap: DEFAULT_TREE_CAP,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_weight(mut self, weight: WeightScheme) -> Self {
        self.weight = weight;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.prune_threshold) {
            return Err(Error::Config(format!(
                "prune threshold {} outside [0, 1)",
                self.prune_threshold
            )));
        }
        Ok(())
    }
}

/// Per-infoset accumulators: cumulative regrets (CFR family) or cumulative
/// counterfactual values Q (CFVFP family), the average-strategy
/// numerator/denominator of Eq-style reach-weighted averaging, and the
/// policy played this iteration.
#[derive(Debug, Clone)]
pub struct InfoSetAccumulator {
    /// Regrets R(I,a) or Q(I,a).
    pub values: Vec<f64>,
    pub avg_num: Vec<f64>,
    pub avg_den: f64,
    /// Current pure action (CFVFP family).
    pub current_action: usize,
    /// Cumulative counterfactual value of the played line (CFVFP+ clamp floor).
    pub baseline: f64,
    cached_policy: Vec<f64>,
    policy_stamp: u64,
    avg_stamp: u64,
}

impl InfoSetAccumulator {
    fn new(n: usize, current_action: usize) -> Self {
        InfoSetAccumulator {
            values: vec![0.0; n],
            avg_num: vec![0.0; n],
            avg_den: 0.0,
            current_action,
            baseline: 0.0,
            cached_policy: Vec::new(),
            policy_stamp: 0,
            avg_stamp: 0,
        }
    }

    pub fn num_actions(&self) -> usize {
        self.values.len()
    }

    /// Average policy from the accumulator; uniform when never weighted.
    pub fn average_policy(&self) -> Policy {
        if self.avg_den > 0.0 {
            let sum: f64 = self.avg_num.iter().sum();
            Policy(self.avg_num.iter().map(|&x| x / sum).collect())
        } else {
            Policy::uniform(self.values.len())
        }
    }
}

/// Clamp accumulator entries up to `floor`, elementwise. Idempotent.
/// CFR+ uses floor 0 on regrets; CFVFP+ floors Q at the running baseline.
pub fn plus_clamp(values: &mut [f64], floor: f64) {
    for v in values.iter_mut() {
        if *v < floor {
            *v = floor;
        }
    }
}

/// Mutable solver state: per-player accumulator maps, the iteration counter,
/// the nodes-touched counter, and the RNG stream.
pub struct SolverState {
    config: SolverConfig,
    accums: Vec<HashMap<InfoSetKey, InfoSetAccumulator>>,
    t: u64,
    nodes_touched: u64,
    rng: SolverRng,
}

impl SolverState {
    /// Build a solver for a 2-player zero-sum game. Full-traversal algorithms
    /// pre-create every infoset accumulator (and enforce the tree cap);
    /// Monte Carlo algorithms create accumulators lazily.
    pub fn new<G: Game>(game: &G, config: SolverConfig) -> Result<Self> {
        config.validate()?;
        if game.num_players() != 2 {
            return Err(Error::InvalidParams(format!(
                "solvers support 2 players, game has {}",
                game.num_players()
            )));
        }
        let mut state = SolverState {
            accums: vec![HashMap::new(), HashMap::new()],
            t: 0,
            nodes_touched: 0,
            rng: SolverRng::seed_from_u64(derive_seed(config.seed, 0)),
            config,
        };
        if state.config.algorithm.is_full_traversal() {
            state.preinit(game)?;
        }
        Ok(state)
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    pub fn iteration(&self) -> u64 {
        self.t
    }

    /// Total node visits across all iterations, terminals and chance included.
    pub fn nodes_touched(&self) -> u64 {
        self.nodes_touched
    }

    pub fn accumulator(&self, player: usize, key: &InfoSetKey) -> Option<&InfoSetAccumulator> {
        self.accums[player].get(key)
    }

    pub fn num_infosets(&self) -> usize {
        self.accums.iter().map(|m| m.len()).sum()
    }

    /// Deterministic DFS pre-pass creating all accumulators.
    fn preinit<G: Game>(&mut self, game: &G) -> Result<()> {
        let cap = self.config.tree_cap;
        let mut count = 0u64;
        let mut stack = vec![game.root()];
        while let Some(state) = stack.pop() {
            count += 1;
            if count > cap {
                return Err(Error::TreeTooLarge { cap });
            }
            match game.kind(&state) {
                NodeKind::Terminal => {}
                NodeKind::Chance => {
                    for a in (0..game.num_actions(&state)).rev() {
                        stack.push(game.apply(&state, a));
                    }
                }
                NodeKind::Decision(p) => {
                    let n = game.num_actions(&state);
                    let key = game.infoset_key(&state);
                    if !self.accums[p.0].contains_key(&key) {
                        let acc = self.fresh_accumulator(n);
                        self.accums[p.0].insert(key, acc);
                    }
                    for a in (0..n).rev() {
                        stack.push(game.apply(&state, a));
                    }
                }
            }
        }
        Ok(())
    }

    fn fresh_accumulator(&mut self, n: usize) -> InfoSetAccumulator {
        let initial = if self.config.algorithm.is_cfv_family() {
            // argmax over an all-zero Q with uniform tie-breaking
            self.rng.gen_range(0..n)
        } else {
            0
        };
        InfoSetAccumulator::new(n, initial)
    }

    /// Force the policy this player will play next iteration at an infoset
    /// (warm starts and worked-example tests). CFVFP-family policies must be
    /// pure.
    pub fn set_current_policy(
        &mut self,
        player: usize,
        key: InfoSetKey,
        policy: Policy,
    ) -> Result<()> {
        let cfv = self.config.algorithm.is_cfv_family();
        let n = policy.len();
        let next_t = self.t + 1;
        let acc = match self.accums[player].get_mut(&key) {
            Some(a) => a,
            None => {
                let acc = self.fresh_accumulator(n);
                self.accums[player].entry(key).or_insert(acc)
            }
        };
        if acc.num_actions() != n {
            return Err(Error::DimensionMismatch { expected: acc.num_actions(), got: n });
        }
        if cfv {
            if !policy.is_pure() {
                return Err(Error::InvalidParams("CFVFP-family policies must be pure".into()));
            }
            acc.current_action = policy.probs().iter().position(|&p| p == 1.0).unwrap();
        } else {
            acc.cached_policy = policy.0;
            acc.policy_stamp = next_t;
        }
        Ok(())
    }

    /// Run one iteration (one simultaneous pass for full-traversal solvers,
    /// one sampled traversal for Monte Carlo ones).
    pub fn iterate<G: Game>(&mut self, game: &G) -> Result<()> {
        let t = self.t + 1;
        let wt = self.config.weight.weight(t);
        let plus = self.config.algorithm.is_plus();
        let root = game.root();
        match self.config.algorithm {
            Algorithm::Cfr | Algorithm::CfrPlus => {
                self.cfr_pass(game, &root, [1.0, 1.0], 1.0, t, plus, wt);
            }
            Algorithm::Cfvfp | Algorithm::CfvfpPlus => {
                self.cfv_pass(game, &root, [1.0, 1.0], 1.0, t, plus, wt, false);
            }
            Algorithm::MccfrEs => {
                let traverser = (t % 2) as usize;
                self.es_pass(game, &root, traverser, 1.0, t, wt);
            }
            Algorithm::Mccfvfp | Algorithm::MccfvfpPlus => {
                self.cfv_pass(game, &root, [1.0, 1.0], 1.0, t, plus, wt, true);
            }
        }
        self.t = t;
        Ok(())
    }

    pub fn run<G: Game>(&mut self, game: &G, iterations: u64) -> Result<()> {
        for _ in 0..iterations {
            self.iterate(game)?;
        }
        Ok(())
    }

    /// Run until the nodes-touched counter reaches `budget`.
    pub fn run_until_nodes<G: Game>(&mut self, game: &G, budget: u64) -> Result<()> {
        while self.nodes_touched < budget {
            self.iterate(game)?;
        }
        Ok(())
    }

    /// Average policy at one infoset (uniform where never reach-weighted).
    pub fn average_policy(&self, player: usize, key: &InfoSetKey) -> Option<Policy> {
        self.accums[player].get(key).map(|a| a.average_policy())
    }

    /// Average-strategy profile over every infoset seen so far.
    pub fn average_profile(&self) -> StrategyProfile {
        let mut profile = StrategyProfile::new(self.accums.len());
        for (p, map) in self.accums.iter().enumerate() {
            for (key, acc) in map {
                profile.insert(crate::game::PlayerId(p), key.clone(), acc.average_policy());
            }
        }
        profile
    }

    /// Sorted accumulator view (checkpointing, diffing, tests).
    pub fn accumulators_sorted(&self) -> Vec<(usize, &InfoSetKey, &InfoSetAccumulator)> {
        let mut out = Vec::new();
        for (p, map) in self.accums.iter().enumerate() {
            let mut keys: Vec<_> = map.keys().collect();
            keys.sort();
            for k in keys {
                out.push((p, k, &map[k]));
            }
        }
        out
    }

    /// The engineering floor treats reach factors below the threshold as
    /// exact zeros; with threshold 0 only true zeros count.
    fn effectively_zero(&self, x: f64) -> bool {
        x == 0.0 || x < self.config.prune_threshold
    }

    /// Skip a subtree when no player can reach it or chance cannot.
    fn prunable(&self, reach: [f64; 2], chance: f64) -> bool {
        self.config.prune
            && ((self.effectively_zero(reach[0]) && self.effectively_zero(reach[1]))
                || self.effectively_zero(chance))
    }

    /// Regret-matching policy for iteration `t`, cached per (infoset, t) so
    /// simultaneous updates all read start-of-iteration regrets. MCCFR plays
    /// a random pure strategy while no regret is positive.
    fn policy_for_iteration(&mut self, player: usize, key: &InfoSetKey, n: usize, t: u64) -> Vec<f64> {
        let mc = !self.config.algorithm.is_full_traversal();
        let acc = match self.accums[player].get_mut(key) {
            Some(a) => a,
            None => {
                let acc = InfoSetAccumulator::new(n, 0);
                self.accums[player].entry(key.clone()).or_insert(acc)
            }
        };
        if acc.policy_stamp != t {
            acc.policy_stamp = t;
            let positive: f64 = acc.values.iter().map(|&v| v.max(0.0)).sum();
            acc.cached_policy = if positive > 0.0 {
                regret_match(&acc.values)
            } else if mc {
                let mut p = vec![0.0; n];
                p[self.rng.gen_range(0..n)] = 1.0;
                p
            } else {
                vec![1.0 / n as f64; n]
            };
        }
        self.accums[player][key].cached_policy.clone()
    }

    /// One simultaneous CFR/CFR+ pass. Returns per-player expected values
    /// under the current joint policy.
    fn cfr_pass<G: Game>(
        &mut self,
        game: &G,
        state: &G::State,
        reach: [f64; 2],
        chance: f64,
        t: u64,
        plus: bool,
        wt: f64,
    ) -> [f64; 2] {
        self.nodes_touched += 1;
        if self.prunable(reach, chance) {
            return [0.0, 0.0];
        }
        match game.kind(state) {
            NodeKind::Terminal => {
                let u = game.payoffs(state);
                [u[0], u[1]]
            }
            NodeKind::Chance => {
                let probs = game.chance_probs(state);
                let mut v = [0.0, 0.0];
                for (a, &p) in probs.iter().enumerate() {
                    let cv = self.cfr_pass(game, &game.apply(state, a), reach, chance * p, t, plus, wt);
                    v[0] += p * cv[0];
                    v[1] += p * cv[1];
                }
                v
            }
            NodeKind::Decision(pl) => {
                let p = pl.0;
                let key = game.infoset_key(state);
                let n = game.num_actions(state);
                let policy = self.policy_for_iteration(p, &key, n, t);
                let mut action_values = vec![[0.0f64; 2]; n];
                let mut v = [0.0, 0.0];
                for a in 0..n {
                    let mut r2 = reach;
                    r2[p] *= policy[a];
                    let cv = self.cfr_pass(game, &game.apply(state, a), r2, chance, t, plus, wt);
                    action_values[a] = cv;
                    v[0] += policy[a] * cv[0];
                    v[1] += policy[a] * cv[1];
                }
                let counterfactual = reach[1 - p] * chance;
                let own = reach[p];
                let acc = self.accums[p].get_mut(&key).expect("accumulator exists");
                if counterfactual > 0.0 {
                    for a in 0..n {
                        acc.values[a] += counterfactual * (action_values[a][p] - v[p]);
                    }
                    if plus {
                        plus_clamp(&mut acc.values, 0.0);
                    }
                }
                if own > 0.0 && acc.avg_stamp != t {
                    acc.avg_stamp = t;
                    let w = wt * own;
                    for a in 0..n {
                        acc.avg_num[a] += w * policy[a];
                    }
                    acc.avg_den += w;
                }
                v
            }
        }
    }

    /// One CFVFP-family pass (Algorithm-1 semantics; `mc` switches to
    /// sampled chance and drops the chance factor, giving MCCFVFP).
    ///
    /// Returns counterfactually weighted values: component i carries
    /// u_i * (other player's reach) * (chance reach unless mc).
    fn cfv_pass<G: Game>(
        &mut self,
        game: &G,
        state: &G::State,
        reach: [f64; 2],
        chance: f64,
        t: u64,
        plus: bool,
        wt: f64,
        mc: bool,
    ) -> [f64; 2] {
        self.nodes_touched += 1;
        if self.prunable(reach, chance) {
            return [0.0, 0.0];
        }
        match game.kind(state) {
            NodeKind::Terminal => {
                let u = game.payoffs(state);
                [u[0] * reach[1] * chance, u[1] * reach[0] * chance]
            }
            NodeKind::Chance => {
                if mc {
                    let a = self.sample_index(&game.chance_probs(state));
                    self.cfv_pass(game, &game.apply(state, a), reach, chance, t, plus, wt, mc)
                } else {
                    let probs = game.chance_probs(state);
                    let mut v = [0.0, 0.0];
                    for (a, &p) in probs.iter().enumerate() {
                        let cv = self.cfv_pass(
                            game,
                            &game.apply(state, a),
                            reach,
                            chance * p,
                            t,
                            plus,
                            wt,
                            mc,
                        );
                        v[0] += cv[0];
                        v[1] += cv[1];
                    }
                    v
                }
            }
            NodeKind::Decision(pl) => {
                let p = pl.0;
                let key = game.infoset_key(state);
                let n = game.num_actions(state);
                if !self.accums[p].contains_key(&key) {
                    let acc = self.fresh_accumulator(n);
                    self.accums[p].insert(key.clone(), acc);
                }
                let cur = self.accums[p][&key].current_action;
                let own = reach[p];
                let mut out = [0.0, 0.0];

                if self.config.prune && self.effectively_zero(reach[1 - p]) {
                    // Opponent cannot reach: every Q increment is zero, so
                    // descend only the played action to propagate their value.
                    let child = game.apply(state, cur);
                    out = self.cfv_pass(game, &child, reach, chance, t, plus, wt, mc);
                } else {
                    let mut incs = vec![0.0f64; n];
                    for a in 0..n {
                        let mut r2 = reach;
                        r2[p] *= if a == cur { 1.0 } else { 0.0 };
                        let cv =
                            self.cfv_pass(game, &game.apply(state, a), r2, chance, t, plus, wt, mc);
                        incs[a] = cv[p];
                        out[1 - p] += cv[1 - p];
                        if a == cur {
                            out[p] = cv[p];
                        }
                    }
                    let acc = self.accums[p].get_mut(&key).expect("accumulator exists");
                    for a in 0..n {
                        acc.values[a] += wt * incs[a];
                    }
                    if plus {
                        acc.baseline += wt * incs[cur];
                        plus_clamp(&mut acc.values, acc.baseline);
                    }
                    // next policy: sticky argmax of cumulative Q
                    let max =
                        acc.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                    if acc.values[cur] < max {
                        let ties: Vec<usize> = acc
                            .values
                            .iter()
                            .enumerate()
                            .filter(|(_, &v)| v == max)
                            .map(|(i, _)| i)
                            .collect();
                        let pick = if ties.len() == 1 {
                            ties[0]
                        } else {
                            ties[self.rng.gen_range(0..ties.len())]
                        };
                        self.accums[p].get_mut(&key).unwrap().current_action = pick;
                    }
                }

                if own > 0.0 {
                    let acc = self.accums[p].get_mut(&key).expect("accumulator exists");
                    if acc.avg_stamp != t {
                        acc.avg_stamp = t;
                        let w = wt * own;
                        acc.avg_num[cur] += w;
                        acc.avg_den += w;
                    }
                }
                out
            }
        }
    }

    /// One external-sampling MCCFR traversal for `traverser`. Returns the
    /// traverser's sampled value.
    fn es_pass<G: Game>(
        &mut self,
        game: &G,
        state: &G::State,
        traverser: usize,
        own_reach: f64,
        t: u64,
        wt: f64,
    ) -> f64 {
        self.nodes_touched += 1;
        match game.kind(state) {
            NodeKind::Terminal => game.payoffs(state)[traverser],
            NodeKind::Chance => {
                let a = self.sample_index(&game.chance_probs(state));
                self.es_pass(game, &game.apply(state, a), traverser, own_reach, t, wt)
            }
            NodeKind::Decision(pl) => {
                let p = pl.0;
                let key = game.infoset_key(state);
                let n = game.num_actions(state);
                let policy = self.policy_for_iteration(p, &key, n, t);
                if p == traverser {
                    let mut action_values = vec![0.0f64; n];
                    let mut v = 0.0;
                    for a in 0..n {
                        action_values[a] = self.es_pass(
                            game,
                            &game.apply(state, a),
                            traverser,
                            own_reach * policy[a],
                            t,
                            wt,
                        );
                        v += policy[a] * action_values[a];
                    }
                    let acc = self.accums[p].get_mut(&key).expect("accumulator exists");
                    for a in 0..n {
                        acc.values[a] += action_values[a] - v;
                    }
                    if own_reach > 0.0 && acc.avg_stamp != t {
                        acc.avg_stamp = t;
                        let w = wt * own_reach;
                        for a in 0..n {
                            acc.avg_num[a] += w * policy[a];
                        }
                        acc.avg_den += w;
                    }
                    v
                } else {
                    let a = self.sample_index(&policy);
                    self.es_pass(game, &game.apply(state, a), traverser, own_reach, t, wt)
                }
            }
        }
    }

    fn sample_index(&mut self, probs: &[f64]) -> usize {
        let x: f64 = self.rng.gen::<f64>();
        let mut acc = 0.0;
        for (i, &p) in probs.iter().enumerate() {
            acc += p;
            if x < acc {
                return i;
            }
        }
        probs.len() - 1
    }

    /// Snapshot of the RNG stream for bit-exact checkpointing.
    pub(crate) fn rng_word_pos(&self) -> u128 {
        self.rng.get_word_pos()
    }

    pub(crate) fn restore_rng(&mut self, word_pos: u128) {
        self.rng = SolverRng::seed_from_u64(derive_seed(self.config.seed, 0));
        self.rng.set_word_pos(word_pos);
    }

    pub(crate) fn restore_counters(&mut self, t: u64, nodes_touched: u64) {
        self.t = t;
        self.nodes_touched = nodes_touched;
    }

    pub(crate) fn insert_accumulator(
        &mut self,
        player: usize,
        key: InfoSetKey,
        acc: InfoSetAccumulator,
    ) {
        self.accums[player].insert(key, acc);
    }

    pub(crate) fn make_restored_accumulator(
        values: Vec<f64>,
        avg_num: Vec<f64>,
        avg_den: f64,
        current_action: usize,
        baseline: f64,
    ) -> InfoSetAccumulator {
        InfoSetAccumulator {
            values,
            avg_num,
            avg_den,
            current_action,
            baseline,
            cached_policy: Vec::new(),
            policy_stamp: 0,
            avg_stamp: 0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::kuhn::{kuhn_ext, KuhnExtParams};
    use crate::matrix::rps_leaky_rock;

    fn kuhn311() -> crate::games::kuhn::KuhnExt {
        kuhn_ext(KuhnExtParams { cards: 3, bet_sizes: 1, raise_cap: 1 }).unwrap()
    }

    #[test]
    fn plus_clamp_is_idempotent() {
        let mut v = vec![-1.0, 2.0];
        plus_clamp(&mut v, 0.0);
        assert_eq!(v, vec![0.0, 2.0]);
        plus_clamp(&mut v, 0.0);
        assert_eq!(v, vec![0.0, 2.0]);
        let mut z = vec![0.0, 0.0];
        plus_clamp(&mut z, 0.0);
        assert_eq!(z, vec![0.0, 0.0]);
    }

    #[test]
    fn cfr_touches_whole_tree_without_pruning() {
        let g = kuhn311();
        let mut cfg = SolverConfig::new(Algorithm::Cfr);
        cfg.prune = false;
        let mut s = SolverState::new(&g, cfg).unwrap();
        s.iterate(&g).unwrap();
        assert_eq!(s.nodes_touched(), 55);
        s.iterate(&g).unwrap();
        assert_eq!(s.nodes_touched(), 110);
    }

    #[test]
    fn cfr_first_iteration_matches_worked_example_on_lifted_leaky_rock() {
        // Player 1 pinned to pure Scissors: player 0's regrets after one pass
        // are the worked numbers (opponent reach is 1 at the root infoset).
        let tree = rps_leaky_rock().to_extensive();
        let mut s = SolverState::new(&tree, SolverConfig::new(Algorithm::Cfr)).unwrap();
        s.set_current_policy(1, InfoSetKey::new(&b"cols"[..]), Policy::pure(3, 2)).unwrap();
        s.iterate(&tree).unwrap();
        let acc = s.accumulator(0, &InfoSetKey::new(&b"rows"[..])).unwrap();
        let u = 0.225;
        assert_eq!(acc.values, vec![1.0 - u, -1.0 - u, 0.0 - u, 0.9 - u]);
    }

    #[test]
    fn cfvfp_q_matches_worked_example_and_argmax_is_rock() {
        let tree = rps_leaky_rock().to_extensive();
        let mut s = SolverState::new(&tree, SolverConfig::new(Algorithm::Cfvfp)).unwrap();
        s.set_current_policy(1, InfoSetKey::new(&b"cols"[..]), Policy::pure(3, 2)).unwrap();
        s.iterate(&tree).unwrap();
        let acc = s.accumulator(0, &InfoSetKey::new(&b"rows"[..])).unwrap();
        assert_eq!(acc.values, vec![1.0, -1.0, 0.0, 0.9]);
        assert_eq!(acc.current_action, 0);
        // LR never becomes the argmax afterwards
        for _ in 0..200 {
            s.set_current_policy(1, InfoSetKey::new(&b"cols"[..]), Policy::pure(3, 2)).unwrap();
            s.iterate(&tree).unwrap();
            assert_ne!(
                s.accumulator(0, &InfoSetKey::new(&b"rows"[..])).unwrap().current_action,
                3
            );
        }
    }

    #[test]
    fn null_game_stays_uniform() {
        // all payoffs zero: regrets stay zero, policies stay uniform
        let zero = crate::matrix::MatrixGame::new(vec![vec![0.0; 3]; 3]).unwrap().to_extensive();
        let mut s = SolverState::new(&zero, SolverConfig::new(Algorithm::Cfr)).unwrap();
        s.run(&zero, 10).unwrap();
        let acc = s.accumulator(0, &InfoSetKey::new(&b"rows"[..])).unwrap();
        assert!(acc.values.iter().all(|&v| v == 0.0));
        for &p in acc.average_policy().probs() {
            assert!((p - 1.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn cfvfp_policies_are_always_pure() {
        let g = kuhn311();
        let mut s = SolverState::new(&g, SolverConfig::new(Algorithm::Cfvfp).with_seed(5)).unwrap();
        s.run(&g, 50).unwrap();
        for (_, _, acc) in s.accumulators_sorted() {
            assert!(acc.current_action < acc.num_actions());
        }
    }

    #[test]
    fn determinism_same_seed_same_trajectory() {
        let g = kuhn311();
        for algo in [Algorithm::Cfr, Algorithm::Cfvfp, Algorithm::MccfrEs, Algorithm::Mccfvfp] {
            let mut a = SolverState::new(&g, SolverConfig::new(algo).with_seed(9)).unwrap();
            let mut b = SolverState::new(&g, SolverConfig::new(algo).with_seed(9)).unwrap();
            a.run(&g, 200).unwrap();
            b.run(&g, 200).unwrap();
            assert_eq!(a.nodes_touched(), b.nodes_touched());
            let av = a.accumulators_sorted();
            let bv = b.accumulators_sorted();
            assert_eq!(av.len(), bv.len());
            for ((pa, ka, aa), (pb, kb, ab)) in av.iter().zip(bv.iter()) {
                assert_eq!(pa, pb);
                assert_eq!(ka, kb);
                assert_eq!(aa.values, ab.values, "{algo:?}");
                assert_eq!(aa.avg_num, ab.avg_num);
            }
        }
    }

    #[test]
    fn average_policy_weighting() {
        // weight scheme t over pure policies [1,0] then [0,1] -> [1/3, 2/3]
        let mut acc = InfoSetAccumulator::new(2, 0);
        acc.avg_num[0] += 1.0 * 1.0;
        acc.avg_den += 1.0;
        acc.avg_num[1] += 2.0 * 1.0;
        acc.avg_den += 2.0;
        let p = acc.average_policy();
        assert!((p.probs()[0] - 1.0 / 3.0).abs() < 1e-15);
        assert!((p.probs()[1] - 2.0 / 3.0).abs() < 1e-15);
        // never-visited infoset -> uniform
        assert_eq!(InfoSetAccumulator::new(3, 0).average_policy().probs(), &[1.0 / 3.0; 3]);
    }

    #[test]
    fn weight_schemes_positive_from_t1() {
        for w in [WeightScheme::Constant, WeightScheme::LogT, WeightScheme::Linear, WeightScheme::Quadratic] {
            assert!(w.weight(1) > 0.0, "{w:?}");
        }
    }

    #[test]
    fn mccfr_zero_regret_plays_random_pure() {
        let g = kuhn311();
        let mut s = SolverState::new(&g, SolverConfig::new(Algorithm::MccfrEs).with_seed(1)).unwrap();
        // first iteration: all regrets zero, so every cached policy is pure
        let key = {
            let deal = g.apply(&g.root(), 0);
            g.infoset_key(&deal)
        };
        let p = s.policy_for_iteration(0, &key, 2, 1);
        assert_eq!(p.iter().filter(|&&x| x == 1.0).count(), 1);
        assert_eq!(p.iter().filter(|&&x| x == 0.0).count(), 1);
    }
}
