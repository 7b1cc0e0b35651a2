//! Two-player zero-sum matrix games and the normal-form learners: regret
//! matching and fictitious play, with dominance detection, the clear/tangled
//! classifier, seeded matrix generators, and the rock-paper-scissors
//! fixtures (including the leaky-rock variant).

use rand::distributions::Distribution;
use rand::Rng;
use rand::SeedableRng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::game::{Game, InfoSetKey, NodeKind, Policy, PlayerId};
use crate::rng::SolverRng;

/// Zero-sum normal-form game. Entries are player-0 payoffs; player 1 gets
/// the negation.
#[derive(Debug, Clone)]
pub struct MatrixGame {
    rows: usize,
    cols: usize,
    payoff: Vec<f64>,
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
}

impl MatrixGame {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let nr = rows.len();
        if nr == 0 || rows[0].is_empty() {
            return Err(Error::InvalidParams("matrix needs at least 1x1".into()));
        }
        let nc = rows[0].len();
        let mut payoff = Vec::with_capacity(nr * nc);
        for r in &rows {
            if r.len() != nc {
                return Err(Error::InvalidParams("ragged matrix".into()));
            }
            for &v in r {
                if !v.is_finite() {
                    return Err(Error::InvalidParams("non-finite payoff".into()));
                }
                payoff.push(v);
            }
        }
        Ok(MatrixGame {
            rows: nr,
            cols: nc,
            payoff,
            row_labels: (0..nr).map(|i| format!("r{i}")).collect(),
            col_labels: (0..nc).map(|i| format!("c{i}")).collect(),
        })
    }

    pub fn with_labels(mut self, rows: &[&str], cols: &[&str]) -> Self {
        self.row_labels = rows.iter().map(|s| s.to_string()).collect();
        self.col_labels = cols.iter().map(|s| s.to_string()).collect();
        self
    }

    pub fn num_rows(&self) -> usize {
        self.rows
    }

    pub fn num_cols(&self) -> usize {
        self.cols
    }

    /// Action count for one player.
    pub fn num_actions(&self, player: PlayerId) -> usize {
        if player.0 == 0 {
            self.rows
        } else {
            self.cols
        }
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.payoff[r * self.cols + c]
    }

    /// Player's payoff for each own action against an opponent pure action.
    pub fn column(&self, player: PlayerId, opp_action: usize) -> Vec<f64> {
        if player.0 == 0 {
            (0..self.rows).map(|r| self.get(r, opp_action)).collect()
        } else {
            (0..self.cols).map(|c| -self.get(opp_action, c)).collect()
        }
    }

    /// Player's payoff for each own action against an opponent mixed strategy.
    pub fn column_vs_mixed(&self, player: PlayerId, opp: &Policy) -> Vec<f64> {
        if player.0 == 0 {
            (0..self.rows)
                .map(|r| (0..self.cols).map(|c| self.get(r, c) * opp.probs()[c]).sum())
                .collect()
        } else {
            (0..self.cols)
                .map(|c| (0..self.rows).map(|r| -self.get(r, c) * opp.probs()[r]).sum())
                .collect()
        }
    }

    /// Player-0 expected payoff under a mixed profile.
    pub fn value(&self, p0: &Policy, p1: &Policy) -> f64 {
        let mut v = 0.0;
        for r in 0..self.rows {
            let pr = p0.probs()[r];
            if pr == 0.0 {
                continue;
            }
            for c in 0..self.cols {
                v += pr * p1.probs()[c] * self.get(r, c);
            }
        }
        v
    }

    /// Lift to a two-level extensive-form game: player 0 picks a row, player 1
    /// picks a column without observing it (one infoset per player).
    pub fn to_extensive(&self) -> MatrixTree {
        MatrixTree { game: self.clone() }
    }
}

/// Which learner update a [`LearnerState`] runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LearnerKind {
    RegretMatching,
    FictitiousPlay,
}

/// Cumulative regrets (RM) or Q-sums (FP) plus the average-strategy
/// accumulator for one player of a matrix game.
#[derive(Debug, Clone)]
pub struct LearnerState {
    kind: LearnerKind,
    values: Vec<f64>,
    avg_acc: Vec<f64>,
    t: u64,
    current: Option<Policy>,
}

impl LearnerState {
    pub fn new(kind: LearnerKind, num_actions: usize) -> Self {
        LearnerState {
            kind,
            values: vec![0.0; num_actions],
            avg_acc: vec![0.0; num_actions],
            t: 0,
            current: None,
        }
    }

    pub fn kind(&self) -> LearnerKind {
        self.kind
    }

    pub fn iteration(&self) -> u64 {
        self.t
    }

    /// Cumulative regrets (RM) or cumulative Q-sums (FP).
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Regret-matching policy: proportional to positive regret parts, uniform
    /// when no positive part exists.
    pub fn rm_next_policy(&self) -> Policy {
        Policy(regret_match(&self.values))
    }

    /// Fictitious-play action: argmax of cumulative Q, ties broken uniformly.
    pub fn fp_next_action(&mut self, rng: &mut impl Rng) -> usize {
        let a = argmax_tie_random(&self.values, rng);
        self.current = Some(Policy::pure(self.values.len(), a));
        a
    }

    /// Observe this iteration's payoff column u(a, opponent play) for every
    /// own action. RM adds u(a,.) - u(sigma_t); FP adds the raw column.
    /// Both fold the played policy into the average-strategy accumulator.
    pub fn observe(&mut self, column: &[f64]) -> Result<()> {
        if column.len() != self.values.len() {
            return Err(Error::DimensionMismatch {
                expected: self.values.len(),
                got: column.len(),
            });
        }
        let played = match self.kind {
            LearnerKind::RegretMatching => self.rm_next_policy(),
            LearnerKind::FictitiousPlay => match self.current.take() {
                Some(p) => p,
                None => Policy::pure(self.values.len(), argmax_first(&self.values)),
            },
        };
        match self.kind {
            LearnerKind::RegretMatching => {
                let u: f64 =
                    played.probs().iter().zip(column).map(|(p, c)| p * c).sum();
                for (v, &c) in self.values.iter_mut().zip(column) {
                    *v += c - u;
                }
            }
            LearnerKind::FictitiousPlay => {
                for (v, &c) in self.values.iter_mut().zip(column) {
                    *v += c;
                }
            }
        }
        for (a, p) in self.avg_acc.iter_mut().zip(played.probs()) {
            *a += p;
        }
        self.t += 1;
        Ok(())
    }

    /// Arithmetic mean of the played policies (uniform before any play).
    pub fn average_policy(&self) -> Policy {
        if self.t == 0 {
            return Policy::uniform(self.values.len());
        }
        Policy(self.avg_acc.iter().map(|&s| s / self.t as f64).collect())
    }
}

pub(crate) fn regret_match(values: &[f64]) -> Vec<f64> {
    let total: f64 = values.iter().map(|&v| v.max(0.0)).sum();
    if total > 0.0 {
        values.iter().map(|&v| v.max(0.0) / total).collect()
    } else {
        vec![1.0 / values.len() as f64; values.len()]
    }
}

pub(crate) fn argmax_first(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    best
}

pub(crate) fn argmax_tie_random(values: &[f64], rng: &mut impl Rng) -> usize {
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let ties: Vec<usize> =
        values.iter().enumerate().filter(|(_, &v)| v == max).map(|(i, _)| i).collect();
    if ties.len() == 1 {
        ties[0]
    } else {
        ties[rng.gen_range(0..ties.len())]
    }
}

/// Exploitability of an average-strategy pair in a matrix game.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NfExploitability {
    pub total: f64,
    pub per_player: [f64; 2],
}

/// eps_i = u_i(BR vs opponent average) - u_i(average profile); total = sum.
pub fn exploitability_nf(game: &MatrixGame, avg0: &Policy, avg1: &Policy) -> NfExploitability {
    let v = game.value(avg0, avg1);
    let br0 = game
        .column_vs_mixed(PlayerId(0), avg1)
        .into_iter()
        .fold(f64::NEG_INFINITY, f64::max);
    let br1 = game
        .column_vs_mixed(PlayerId(1), avg0)
        .into_iter()
        .fold(f64::NEG_INFINITY, f64::max);
    let e0 = br0 - v;
    let e1 = br1 - (-v);
    NfExploitability { total: e0 + e1, per_player: [e0, e1] }
}

/// Pure actions weakly dominated by some other pure action (with at least one
/// strict column). A sound under-approximation of mixed-strategy dominance.
pub fn find_dominated_pure(game: &MatrixGame, player: PlayerId) -> Vec<usize> {
    let n = game.num_actions(player);
    let opp = game.num_actions(PlayerId(1 - player.0));
    let payoff = |a: usize, o: usize| -> f64 {
        if player.0 == 0 {
            game.get(a, o)
        } else {
            -game.get(o, a)
        }
    };
    let mut dominated = Vec::new();
    'outer: for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            let mut strict = false;
            let mut weak = true;
            for o in 0..opp {
                let (ua, ub) = (payoff(a, o), payoff(b, o));
                if ua > ub {
                    weak = false;
                    break;
                }
                if ua < ub {
                    strict = true;
                }
            }
            if weak && strict {
                dominated.push(a);
                continue 'outer;
            }
        }
    }
    dominated
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GameClass {
    Clear,
    Tangled,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Clarity {
    pub class: GameClass,
    pub num_actions: usize,
    pub non_dominated: usize,
}

/// Clear iff |A_nd| <= sqrt(|A|), using the pure-dominance under-approximation.
pub fn classify_clear(game: &MatrixGame, player: PlayerId) -> Clarity {
    let n = game.num_actions(player);
    let nd = n - find_dominated_pure(game, player).len();
    let class = if (nd as f64) <= (n as f64).sqrt() { GameClass::Clear } else { GameClass::Tangled };
    Clarity { class, num_actions: n, non_dominated: nd }
}

/// n x m matrix with i.i.d. standard-normal entries from the seeded generator.
pub fn gen_random_matrix(n: usize, m: usize, seed: u64) -> Result<MatrixGame> {
    gen_boosted_matrix(n, m, 0, 0.0, seed)
}

/// As [`gen_random_matrix`], then adds `boost` to every entry of the first
/// `boosted_rows` rows.
pub fn gen_boosted_matrix(
    n: usize,
    m: usize,
    boosted_rows: usize,
    boost: f64,
    seed: u64,
) -> Result<MatrixGame> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidParams("matrix needs at least 1x1".into()));
    }
    if boosted_rows > n {
        return Err(Error::InvalidParams("boosted_rows exceeds row count".into()));
    }
    let mut rng = SolverRng::seed_from_u64(seed);
    let normal = StandardNormal;
    let mut rows = Vec::with_capacity(n);
    for r in 0..n {
        let add = if r < boosted_rows { boost } else { 0.0 };
        rows.push((0..m).map(|_| { let x: f64 = normal.sample(&mut rng); x + add }).collect());
    }
    MatrixGame::new(rows)
}

/// Rock-paper-scissors.
pub fn rps() -> MatrixGame {
    MatrixGame::new(vec![
        vec![0.0, -1.0, 1.0],
        vec![1.0, 0.0, -1.0],
        vec![-1.0, 1.0, 0.0],
    ])
    .unwrap()
    .with_labels(&["R", "P", "S"], &["R", "P", "S"])
}

/// Rock-paper-scissors with the dominated Leaky Rock row for player 0:
/// LR pays 0.1 less than Rock against every column.
pub fn rps_leaky_rock() -> MatrixGame {
    MatrixGame::new(vec![
        vec![0.0, -1.0, 1.0],
        vec![1.0, 0.0, -1.0],
        vec![-1.0, 1.0, 0.0],
        vec![-0.1, -1.1, 0.9],
    ])
    .unwrap()
    .with_labels(&["R", "P", "S", "LR"], &["R", "P", "S"])
}

/// Matrix-game self-play driver shared by experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixAlgo {
    RegretMatching,
    FictitiousPlay,
}

impl MatrixAlgo {
    pub fn name(&self) -> &'static str {
        match self {
            MatrixAlgo::RegretMatching => "rm",
            MatrixAlgo::FictitiousPlay => "fp",
        }
    }
}

pub struct SelfPlay {
    game: MatrixGame,
    algo: MatrixAlgo,
    learners: [LearnerState; 2],
    rng: SolverRng,
}

impl SelfPlay {
    pub fn new(game: MatrixGame, algo: MatrixAlgo, seed: u64) -> Self {
        let kind = match algo {
            MatrixAlgo::RegretMatching => LearnerKind::RegretMatching,
            MatrixAlgo::FictitiousPlay => LearnerKind::FictitiousPlay,
        };
        let learners = [
            LearnerState::new(kind, game.num_rows()),
            LearnerState::new(kind, game.num_cols()),
        ];
        SelfPlay { game, algo, learners, rng: SolverRng::seed_from_u64(seed) }
    }

    pub fn game(&self) -> &MatrixGame {
        &self.game
    }

    pub fn learner(&self, player: PlayerId) -> &LearnerState {
        &self.learners[player.0]
    }

    /// One simultaneous self-play iteration.
    pub fn step(&mut self) {
        match self.algo {
            MatrixAlgo::RegretMatching => {
                let s0 = self.learners[0].rm_next_policy();
                let s1 = self.learners[1].rm_next_policy();
                let c0 = self.game.column_vs_mixed(PlayerId(0), &s1);
                let c1 = self.game.column_vs_mixed(PlayerId(1), &s0);
                self.learners[0].observe(&c0).unwrap();
                self.learners[1].observe(&c1).unwrap();
            }
            MatrixAlgo::FictitiousPlay => {
                let a0 = self.learners[0].fp_next_action(&mut self.rng);
                let a1 = self.learners[1].fp_next_action(&mut self.rng);
                let c0 = self.game.column(PlayerId(0), a1);
                let c1 = self.game.column(PlayerId(1), a0);
                self.learners[0].observe(&c0).unwrap();
                self.learners[1].observe(&c1).unwrap();
            }
        }
    }

    pub fn exploitability(&self) -> NfExploitability {
        exploitability_nf(
            &self.game,
            &self.learners[0].average_policy(),
            &self.learners[1].average_policy(),
        )
    }
}

/// Matrix game lifted to a two-level extensive-form tree.
pub struct MatrixTree {
    game: MatrixGame,
}

#[derive(Debug, Clone, Default)]
pub struct MatrixTreeState {
    row: Option<u16>,
    col: Option<u16>,
}

impl Game for MatrixTree {
    type State = MatrixTreeState;

    fn num_players(&self) -> usize {
        2
    }

    fn root(&self) -> MatrixTreeState {
        MatrixTreeState::default()
    }

    fn kind(&self, s: &MatrixTreeState) -> NodeKind {
        match (s.row, s.col) {
            (None, _) => NodeKind::Decision(PlayerId(0)),
            (Some(_), None) => NodeKind::Decision(PlayerId(1)),
            _ => NodeKind::Terminal,
        }
    }

    fn num_actions(&self, s: &MatrixTreeState) -> usize {
        if s.row.is_none() {
            self.game.num_rows()
        } else {
            self.game.num_cols()
        }
    }

    fn apply(&self, s: &MatrixTreeState, action: usize) -> MatrixTreeState {
        let mut n = s.clone();
        if s.row.is_none() {
            n.row = Some(action as u16);
        } else {
            n.col = Some(action as u16);
        }
        n
    }

    fn chance_probs(&self, _s: &MatrixTreeState) -> Vec<f64> {
        Vec::new()
    }

    fn payoffs(&self, s: &MatrixTreeState) -> Vec<f64> {
        let v = self.game.get(s.row.unwrap() as usize, s.col.unwrap() as usize);
        vec![v, -v]
    }

    fn infoset_key(&self, s: &MatrixTreeState) -> InfoSetKey {
        // Player 1 must not observe the row: one infoset per player.
        if s.row.is_none() {
            InfoSetKey::new(&b"rows"[..])
        } else {
            InfoSetKey::new(&b"cols"[..])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::enumerate_tree;

    #[test]
    fn leaky_rock_matrix_entries() {
        let g = rps_leaky_rock();
        assert_eq!(g.get(3, 2), 0.9); // (LR, Scissors)
        assert_eq!(g.get(0, 0), 0.0); // (R, R)
        for c in 0..3 {
            assert!((g.get(3, c) - (g.get(0, c) - 0.1)).abs() < 1e-15);
        }
    }

    #[test]
    fn rm_observation_matches_worked_example() {
        // Uniform over (R, P, S, LR) observing the Scissors column.
        let mut l = LearnerState::new(LearnerKind::RegretMatching, 4);
        let col = rps_leaky_rock().column(PlayerId(0), 2);
        assert_eq!(col, vec![1.0, -1.0, 0.0, 0.9]);
        l.observe(&col).unwrap();
        let u = 0.225;
        assert_eq!(l.values(), &[1.0 - u, -1.0 - u, 0.0 - u, 0.9 - u]);
        let p = l.rm_next_policy();
        assert!((p.probs()[0] - 0.775 / 1.45).abs() < 1e-12);
        assert!((p.probs()[3] - 0.675 / 1.45).abs() < 1e-12);
        assert_eq!(p.probs()[1], 0.0);
        assert_eq!(p.probs()[2], 0.0);
    }

    #[test]
    fn rm_policy_edge_cases() {
        let mut l = LearnerState::new(LearnerKind::RegretMatching, 2);
        l.values = vec![-1.0, -2.0];
        assert_eq!(l.rm_next_policy().probs(), &[0.5, 0.5]);
        let mut l = LearnerState::new(LearnerKind::RegretMatching, 3);
        l.values = vec![2.0, 1.0, 1.0];
        assert_eq!(l.rm_next_policy().probs(), &[0.5, 0.25, 0.25]);
    }

    #[test]
    fn fp_observation_and_argmax() {
        let mut l = LearnerState::new(LearnerKind::FictitiousPlay, 3);
        l.observe(&[0.0, 0.0, 0.0]).unwrap();
        assert_eq!(l.values(), &[0.0, 0.0, 0.0]);
        assert_eq!(l.iteration(), 1);

        let mut l = LearnerState::new(LearnerKind::FictitiousPlay, 2);
        l.observe(&[1.0, 2.0]).unwrap();
        l.observe(&[3.0, 1.0]).unwrap();
        assert_eq!(l.values(), &[4.0, 3.0]);

        let mut rng = SolverRng::seed_from_u64(7);
        let mut l = LearnerState::new(LearnerKind::FictitiousPlay, 3);
        l.values = vec![0.9, 0.1, 0.1];
        assert_eq!(l.fp_next_action(&mut rng), 0);
    }

    #[test]
    fn fp_tie_rule_is_uniform() {
        let mut rng = SolverRng::seed_from_u64(11);
        let mut counts = [0u32; 3];
        for _ in 0..4000 {
            let mut l = LearnerState::new(LearnerKind::FictitiousPlay, 3);
            l.values = vec![1.0, 1.0, 0.0];
            counts[l.fp_next_action(&mut rng)] += 1;
        }
        assert_eq!(counts[2], 0);
        let frac = counts[0] as f64 / 4000.0;
        assert!((frac - 0.5).abs() < 0.05, "tie split {frac}");
    }

    #[test]
    fn fp_never_picks_leaky_rock_after_first_observation() {
        let g = rps_leaky_rock();
        let mut rng = SolverRng::seed_from_u64(3);
        let mut l = LearnerState::new(LearnerKind::FictitiousPlay, 4);
        l.observe(&g.column(PlayerId(0), 2)).unwrap();
        assert_eq!(l.values(), &[1.0, -1.0, 0.0, 0.9]);
        assert_eq!(argmax_first(l.values()), 0);
        for i in 0..1000 {
            let a = l.fp_next_action(&mut rng);
            assert_ne!(a, 3, "LR selected at iteration {i}");
            l.observe(&g.column(PlayerId(0), i % 3)).unwrap();
        }
    }

    #[test]
    fn exploitability_rps_cases() {
        let g = rps();
        let u = Policy::uniform(3);
        let e = exploitability_nf(&g, &u, &u);
        assert!(e.total.abs() < 1e-12);
        let rock = Policy::pure(3, 0);
        let e = exploitability_nf(&g, &rock, &u);
        assert!((e.per_player[0] - 0.0).abs() < 1e-12);
        assert!((e.per_player[1] - 1.0).abs() < 1e-12);
        assert!((e.total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dominance_detection() {
        assert_eq!(find_dominated_pure(&rps_leaky_rock(), PlayerId(0)), vec![3]);
        assert!(find_dominated_pure(&rps(), PlayerId(0)).is_empty());
        let g = MatrixGame::new(vec![vec![1.0], vec![0.0]]).unwrap();
        assert_eq!(find_dominated_pure(&g, PlayerId(0)), vec![1]);
    }

    #[test]
    fn clear_classification() {
        let c = classify_clear(&rps(), PlayerId(0));
        assert_eq!(c.class, GameClass::Tangled);
        assert_eq!(c.non_dominated, 3);
        let g = MatrixGame::new(vec![vec![0.0]]).unwrap();
        assert_eq!(classify_clear(&g, PlayerId(0)).class, GameClass::Clear);
    }

    #[test]
    fn generators_are_deterministic_and_normal() {
        let a = gen_random_matrix(10, 10, 99).unwrap();
        let b = gen_random_matrix(10, 10, 99).unwrap();
        for r in 0..10 {
            for c in 0..10 {
                assert_eq!(a.get(r, c), b.get(r, c));
            }
        }
        let big = gen_random_matrix(100, 100, 1).unwrap();
        let n = 10_000.0;
        let mean: f64 = big.payoff.iter().sum::<f64>() / n;
        let var: f64 = big.payoff.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        assert!(mean.abs() < 0.05, "sample mean {mean}");
        assert!((0.9..1.1).contains(&var), "sample variance {var}");

        let boosted = gen_boosted_matrix(100, 100, 10, 5.0, 1).unwrap();
        for c in 0..100 {
            assert_eq!(boosted.get(42, c), big.get(42, c));
            assert_eq!(boosted.get(3, c), big.get(3, c) + 5.0);
        }
    }

    #[test]
    fn lifted_rps_census_matches_table() {
        let t = rps().to_extensive();
        let c = enumerate_tree(&t).unwrap();
        assert_eq!(c.total_infosets(), 2);
        assert_eq!(c.total_nodes, 13);
    }

    #[test]
    fn rm_self_play_converges_on_small_matrix() {
        // 5x5 N(0,1) matrix, 1e5 RM iterations: eps below the O(L sqrt(|A|/T)) scale.
        let g = gen_random_matrix(5, 5, 12).unwrap();
        let mut sp = SelfPlay::new(g, MatrixAlgo::RegretMatching, 5);
        for _ in 0..100_000 {
            sp.step();
        }
        let e = sp.exploitability();
        assert!(e.total < 0.05, "exploitability {}", e.total);
    }

    #[test]
    fn average_strategy_identity() {
        // accumulator mean equals the arithmetic mean of played policies
        let g = rps();
        let mut sp = SelfPlay::new(g.clone(), MatrixAlgo::RegretMatching, 0);
        let mut manual = vec![0.0; 3];
        for _ in 0..500 {
            let p = sp.learners[0].rm_next_policy();
            for (m, v) in manual.iter_mut().zip(p.probs()) {
                *m += v;
            }
            sp.step();
        }
        let avg = sp.learners[0].average_policy();
        for (m, a) in manual.iter().zip(avg.probs()) {
            assert!((m / 500.0 - a).abs() < 1e-12);
        }
    }

    #[test]
    fn fp_q_affine_identity() {
        // Q-bar from increments equals u(a, average opponent strategy).
        let g = rps_leaky_rock();
        let mut sp = SelfPlay::new(g.clone(), MatrixAlgo::FictitiousPlay, 21);
        for _ in 0..2000 {
            sp.step();
        }
        let t = sp.learners[0].iteration() as f64;
        let avg_opp = sp.learners[1].average_policy();
        let expect = g.column_vs_mixed(PlayerId(0), &avg_opp);
        for (q, e) in sp.learners[0].values().iter().zip(expect) {
            assert!((q / t - e).abs() < 1e-9, "{} vs {}", q / t, e);
        }
    }
}
