//! Extensive-form game abstraction.
//!
//! Games expose a pure transition function over opaque states; nothing here
//! materializes the tree, so solvers can recurse over games far larger than
//! memory. Information sets are identified by byte-string keys built by each
//! game from the acting player's observations (private info + public action
//! history). Action lists are ordered and positional: a policy's i-th entry
//! refers to the i-th legal action, and every state in an information set
//! must offer the same action list.

use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};

/// 0-based player index. Chance is not a player; it is a [`NodeKind`] variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlayerId(pub usize);

impl PlayerId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for PlayerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P{}", self.0)
    }
}

/// What kind of node a state is.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    Chance,
    Decision(PlayerId),
    Terminal,
}

/// Opaque byte string identifying an information set for one player.
///
/// Two states share a key iff the acting player cannot distinguish them.
/// Keys are only compared within one player's map; different players may
/// reuse the same bytes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct InfoSetKey(pub Vec<u8>);

impl InfoSetKey {
    pub fn new(bytes: impl Into<Vec<u8>>) -> Self {
        InfoSetKey(bytes.into())
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn from_hex(s: &str) -> Result<Self> {
        if s.len() % 2 != 0 {
            return Err(Error::Checkpoint(format!("odd hex key length: {s}")));
        }
        let mut out = Vec::with_capacity(s.len() / 2);
        for i in (0..s.len()).step_by(2) {
            let b = u8::from_str_radix(&s[i..i + 2], 16)
                .map_err(|e| Error::Checkpoint(format!("bad hex key: {e}")))?;
            out.push(b);
        }
        Ok(InfoSetKey(out))
    }
}

impl fmt::Display for InfoSetKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            if b.is_ascii_graphic() {
                write!(f, "{}", b as char)?;
            } else {
                write!(f, "\\x{b:02x}")?;
            }
        }
        Ok(())
    }
}

const PROB_TOL: f64 = 1e-9;

/// Probability distribution over an infoset's ordered action list.
#[derive(Debug, Clone, PartialEq)]
pub struct Policy(pub Vec<f64>);

impl Policy {
    /// Validates non-negativity and normalization to within 1e-9.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidParams("empty policy".into()));
        }
        if probs.iter().any(|&p| !(p >= 0.0) || !p.is_finite()) {
            return Err(Error::InvalidParams(format!("negative or non-finite policy: {probs:?}")));
        }
        let s: f64 = probs.iter().sum();
        if (s - 1.0).abs() > PROB_TOL {
            return Err(Error::InvalidParams(format!("policy sums to {s}, not 1")));
        }
        Ok(Policy(probs))
    }

    pub fn uniform(n: usize) -> Self {
        Policy(vec![1.0 / n as f64; n])
    }

    /// One-hot policy playing `action`.
    pub fn pure(n: usize, action: usize) -> Self {
        let mut p = vec![0.0; n];
        p[action] = 1.0;
        Policy(p)
    }

    pub fn probs(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// True when exactly one entry is 1 and the rest are 0.
    pub fn is_pure(&self) -> bool {
        let mut ones = 0;
        for &p in &self.0 {
            if p == 1.0 {
                ones += 1;
            } else if p != 0.0 {
                return false;
            }
        }
        ones == 1
    }
}

/// Per-player map from infoset key to policy. Missing entries default to
/// uniform over the infoset's action list.
#[derive(Debug, Clone, Default)]
pub struct StrategyProfile {
    maps: Vec<HashMap<InfoSetKey, Policy>>,
}

impl StrategyProfile {
    pub fn new(num_players: usize) -> Self {
        StrategyProfile { maps: vec![HashMap::new(); num_players] }
    }

    pub fn num_players(&self) -> usize {
        self.maps.len()
    }

    pub fn insert(&mut self, player: PlayerId, key: InfoSetKey, policy: Policy) {
        self.maps[player.0].insert(key, policy);
    }

    pub fn get(&self, player: PlayerId, key: &InfoSetKey) -> Option<&Policy> {
        self.maps[player.0].get(key)
    }

    /// Policy at an infoset, defaulting to uniform over `n` actions.
    pub fn policy_or_uniform(&self, player: PlayerId, key: &InfoSetKey, n: usize) -> Policy {
        match self.maps[player.0].get(key) {
            Some(p) => p.clone(),
            None => Policy::uniform(n),
        }
    }

    pub fn player_map(&self, player: PlayerId) -> &HashMap<InfoSetKey, Policy> {
        &self.maps[player.0]
    }

    pub fn iter_sorted(&self) -> impl Iterator<Item = (PlayerId, &InfoSetKey, &Policy)> {
        self.maps.iter().enumerate().flat_map(|(p, m)| {
            let mut keys: Vec<_> = m.keys().collect();
            keys.sort();
            keys.into_iter().map(move |k| (PlayerId(p), k, &m[k]))
        })
    }
}

/// An extensive-form game exposed as a pure transition function.
///
/// Contract: the tree is finite and acyclic; chance distributions sum to 1
/// within 1e-9; terminal payoffs of 2-player games sum to 0 within 1e-9;
/// all states sharing an infoset key offer identical action lists.
pub trait Game: Send + Sync {
    type State: Clone + Send;

    fn num_players(&self) -> usize;
    fn root(&self) -> Self::State;
    fn kind(&self, state: &Self::State) -> NodeKind;
    /// Number of legal actions at a non-terminal state.
    fn num_actions(&self, state: &Self::State) -> usize;
    fn apply(&self, state: &Self::State, action: usize) -> Self::State;
    /// Probability vector over a chance node's actions.
    fn chance_probs(&self, state: &Self::State) -> Vec<f64>;
    /// Per-player payoff vector at a terminal state, in game units.
    fn payoffs(&self, state: &Self::State) -> Vec<f64>;
    /// Information-set key for the acting player at a decision state.
    fn infoset_key(&self, state: &Self::State) -> InfoSetKey;
}

/// Default node cap for exhaustive traversals.
pub const DEFAULT_TREE_CAP: u64 = 100_000_000;

/// Exact node/infoset counts from one exhaustive traversal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeCensus {
    pub total_nodes: u64,
    pub terminal_nodes: u64,
    pub chance_nodes: u64,
    pub decision_nodes_per_player: Vec<u64>,
    pub infosets_per_player: Vec<u64>,
}

impl TreeCensus {
    pub fn total_infosets(&self) -> u64 {
        self.infosets_per_player.iter().sum()
    }

    pub fn total_decision_nodes(&self) -> u64 {
        self.decision_nodes_per_player.iter().sum()
    }
}

/// Exhaustive depth-first census of a game tree.
pub fn enumerate_tree<G: Game>(game: &G) -> Result<TreeCensus> {
    enumerate_tree_capped(game, DEFAULT_TREE_CAP)
}

pub fn enumerate_tree_capped<G: Game>(game: &G, cap: u64) -> Result<TreeCensus> {
    let n = game.num_players();
    let mut census = TreeCensus {
        total_nodes: 0,
        terminal_nodes: 0,
        chance_nodes: 0,
        decision_nodes_per_player: vec![0; n],
        infosets_per_player: vec![0; n],
    };
    let mut seen: Vec<HashSet<InfoSetKey>> = vec![HashSet::new(); n];
    let mut stack = vec![game.root()];
    while let Some(state) = stack.pop() {
        census.total_nodes += 1;
        if census.total_nodes > cap {
            return Err(Error::TreeTooLarge { cap });
        }
        match game.kind(&state) {
            NodeKind::Terminal => census.terminal_nodes += 1,
            NodeKind::Chance => {
                census.chance_nodes += 1;
                for a in 0..game.num_actions(&state) {
                    stack.push(game.apply(&state, a));
                }
            }
            NodeKind::Decision(p) => {
                census.decision_nodes_per_player[p.0] += 1;
                if seen[p.0].insert(game.infoset_key(&state)) {
                    census.infosets_per_player[p.0] += 1;
                }
                for a in 0..game.num_actions(&state) {
                    stack.push(game.apply(&state, a));
                }
            }
        }
    }
    Ok(census)
}

/// Reach-probability factors of the state reached by `actions` from the root,
/// split per player plus the chance contribution.
#[derive(Debug, Clone, PartialEq)]
pub struct ReachProbs {
    pub per_player: Vec<f64>,
    pub chance: f64,
}

impl ReachProbs {
    pub fn product(&self) -> f64 {
        self.per_player.iter().product::<f64>() * self.chance
    }
}

/// Walk an action path from the root, factoring each actor's probability.
pub fn reach_probabilities<G: Game>(
    game: &G,
    profile: &StrategyProfile,
    actions: &[usize],
) -> Result<ReachProbs> {
    let mut reach = ReachProbs { per_player: vec![1.0; game.num_players()], chance: 1.0 };
    let mut state = game.root();
    for &a in actions {
        match game.kind(&state) {
            NodeKind::Terminal => {
                return Err(Error::InvalidParams("action path runs past a terminal".into()))
            }
            NodeKind::Chance => {
                let probs = game.chance_probs(&state);
                reach.chance *= probs[a];
            }
            NodeKind::Decision(p) => {
                let key = game.infoset_key(&state);
                let policy = profile.policy_or_uniform(p, &key, game.num_actions(&state));
                reach.per_player[p.0] *= policy.probs()[a];
            }
        }
        state = game.apply(&state, a);
    }
    Ok(reach)
}

/// Exact expected payoff vector under a profile, by full traversal.
pub fn expected_value<G: Game>(game: &G, profile: &StrategyProfile) -> Vec<f64> {
    fn rec<G: Game>(game: &G, profile: &StrategyProfile, state: &G::State) -> Vec<f64> {
        match game.kind(state) {
            NodeKind::Terminal => game.payoffs(state),
            NodeKind::Chance => {
                let probs = game.chance_probs(state);
                let mut acc = vec![0.0; game.num_players()];
                for (a, &p) in probs.iter().enumerate() {
                    if p == 0.0 {
                        continue;
                    }
                    let v = rec(game, profile, &game.apply(state, a));
                    for (x, y) in acc.iter_mut().zip(v) {
                        *x += p * y;
                    }
                }
                acc
            }
            NodeKind::Decision(pl) => {
                let key = game.infoset_key(state);
                let n = game.num_actions(state);
                let policy = profile.policy_or_uniform(pl, &key, n);
                let mut acc = vec![0.0; game.num_players()];
                for (a, &p) in policy.probs().iter().enumerate() {
                    if p == 0.0 {
                        continue;
                    }
                    let v = rec(game, profile, &game.apply(state, a));
                    for (x, y) in acc.iter_mut().zip(v) {
                        *x += p * y;
                    }
                }
                acc
            }
        }
    }
    rec(game, profile, &game.root())
}

/// Perfect-recall and structural validation.
///
/// Checks that chance distributions normalize, that 2-player payoffs are
/// zero-sum, that states sharing an infoset key agree on action count, and
/// that a key never spans two different own-action histories for its player.
pub fn validate<G: Game>(game: &G, cap: u64) -> Result<()> {
    // per (player, key): (action count, player's own action history)
    let mut keys: Vec<HashMap<InfoSetKey, (usize, Vec<usize>)>> =
        vec![HashMap::new(); game.num_players()];
    let mut count: u64 = 0;
    let mut stack: Vec<(G::State, Vec<Vec<usize>>)> =
        vec![(game.root(), vec![Vec::new(); game.num_players()])];
    while let Some((state, own_hist)) = stack.pop() {
        count += 1;
        if count > cap {
            return Err(Error::TreeTooLarge { cap });
        }
        match game.kind(&state) {
            NodeKind::Terminal => {
                if game.num_players() == 2 {
                    let u = game.payoffs(&state);
                    if (u[0] + u[1]).abs() > PROB_TOL {
                        return Err(Error::InvalidParams(format!(
                            "terminal payoffs not zero-sum: {u:?}"
                        )));
                    }
                }
            }
            NodeKind::Chance => {
                let probs = game.chance_probs(&state);
                let s: f64 = probs.iter().sum();
                if (s - 1.0).abs() > PROB_TOL {
                    return Err(Error::InvalidParams(format!("chance sums to {s}")));
                }
                for a in 0..game.num_actions(&state) {
                    stack.push((game.apply(&state, a), own_hist.clone()));
                }
            }
            NodeKind::Decision(p) => {
                let key = game.infoset_key(&state);
                let n = game.num_actions(&state);
                match keys[p.0].get(&key) {
                    Some((n0, h0)) => {
                        if *n0 != n {
                            return Err(Error::InvalidParams(format!(
                                "infoset {key} has action counts {n0} and {n}"
                            )));
                        }
                        if *h0 != own_hist[p.0] {
                            return Err(Error::InvalidParams(format!(
                                "infoset {key} spans different own histories (perfect recall)"
                            )));
                        }
                    }
                    None => {
                        keys[p.0].insert(key, (n, own_hist[p.0].clone()));
                    }
                }
                for a in 0..n {
                    let mut h = own_hist.clone();
                    h[p.0].push(a);
                    stack.push((game.apply(&state, a), h));
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Single-terminal game: one node, no infosets.
    struct SingleTerminal;
    impl Game for SingleTerminal {
        type State = ();
        fn num_players(&self) -> usize {
            2
        }
        fn root(&self) -> () {}
        fn kind(&self, _: &()) -> NodeKind {
            NodeKind::Terminal
        }
        fn num_actions(&self, _: &()) -> usize {
            0
        }
        fn apply(&self, _: &(), _: usize) -> () {}
        fn chance_probs(&self, _: &()) -> Vec<f64> {
            vec![]
        }
        fn payoffs(&self, _: &()) -> Vec<f64> {
            vec![0.0, 0.0]
        }
        fn infoset_key(&self, _: &()) -> InfoSetKey {
            InfoSetKey::default()
        }
    }

    #[test]
    fn single_terminal_census() {
        let c = enumerate_tree(&SingleTerminal).unwrap();
        assert_eq!(c.total_nodes, 1);
        assert_eq!(c.terminal_nodes, 1);
        assert_eq!(c.total_infosets(), 0);
    }

    #[test]
    fn policy_validation() {
        assert!(Policy::new(vec![0.5, 0.5]).is_ok());
        assert!(Policy::new(vec![0.6, 0.39]).is_err());
        assert!(Policy::new(vec![-0.1, 1.1]).is_err());
        assert!(Policy::new(vec![]).is_err());
        assert!(Policy::pure(3, 1).is_pure());
        assert!(!Policy::uniform(2).is_pure());
    }

    #[test]
    fn root_reach_is_all_ones() {
        let g = SingleTerminal;
        let profile = StrategyProfile::new(2);
        let r = reach_probabilities(&g, &profile, &[]).unwrap();
        assert_eq!(r.per_player, vec![1.0, 1.0]);
        assert_eq!(r.chance, 1.0);
    }

    #[test]
    fn infoset_key_hex_round_trip() {
        let k = InfoSetKey::new(vec![0u8, 255, 17, b'k']);
        assert_eq!(InfoSetKey::from_hex(&k.to_hex()).unwrap(), k);
    }
}
