//! Measurement layer: exact best response and exploitability by full
//! traversal, the four-color node census under pure profiles with its
//! closed-form predictions on complete alternating trees, and the per-infoset
//! operation-count model.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::game::{
    Game, InfoSetKey, NodeKind, Policy, PlayerId, StrategyProfile, DEFAULT_TREE_CAP,
};

/// Best-response value and a pure strategy achieving it.
///
/// Computed with counterfactual aggregation per infoset: for every infoset of
/// the responding player, the opponent-and-chance reach-weighted action
/// values are summed over the infoset's states before maximizing, processing
/// infosets deepest-first in the player's own action history. Ties pick the
/// lowest action index.
pub fn best_response<G: Game>(
    game: &G,
    profile: &StrategyProfile,
    player: PlayerId,
) -> Result<(f64, StrategyProfile)> {
    best_response_capped(game, profile, player, DEFAULT_TREE_CAP)
}

enum BrNode {
    Terminal(f64),
    // weighted children: policy or chance probability
    Mix(Vec<(usize, f64)>),
    Own { key_id: usize, children: Vec<usize> },
}

pub fn best_response_capped<G: Game>(
    game: &G,
    profile: &StrategyProfile,
    player: PlayerId,
    cap: u64,
) -> Result<(f64, StrategyProfile)> {
    // Pass 1: materialize the tree from the responder's perspective.
    let mut arena: Vec<BrNode> = Vec::new();
    let mut key_ids: HashMap<InfoSetKey, usize> = HashMap::new();
    let mut keys: Vec<InfoSetKey> = Vec::new();
    // per key: (own-depth, [(node, omega)])
    let mut groups: Vec<(usize, Vec<(usize, f64)>)> = Vec::new();

    struct Frame<S> {
        state: S,
        omega: f64,
        own_depth: usize,
    }
    fn build<G: Game>(
        game: &G,
        profile: &StrategyProfile,
        player: PlayerId,
        cap: u64,
        arena: &mut Vec<BrNode>,
        key_ids: &mut HashMap<InfoSetKey, usize>,
        keys: &mut Vec<InfoSetKey>,
        groups: &mut Vec<(usize, Vec<(usize, f64)>)>,
        f: Frame<G::State>,
    ) -> Result<usize> {
        if arena.len() as u64 >= cap {
            return Err(Error::TreeTooLarge { cap });
        }
        let idx = arena.len();
        match game.kind(&f.state) {
            NodeKind::Terminal => {
                arena.push(BrNode::Terminal(game.payoffs(&f.state)[player.0]));
            }
            NodeKind::Chance => {
                arena.push(BrNode::Mix(Vec::new()));
                let probs = game.chance_probs(&f.state);
                let mut children = Vec::with_capacity(probs.len());
                for (a, &p) in probs.iter().enumerate() {
                    let child = build(
                        game,
                        profile,
                        player,
                        cap,
                        arena,
                        key_ids,
                        keys,
                        groups,
                        Frame {
                            state: game.apply(&f.state, a),
                            omega: f.omega * p,
                            own_depth: f.own_depth,
                        },
                    )?;
                    children.push((child, p));
                }
                arena[idx] = BrNode::Mix(children);
            }
            NodeKind::Decision(p) if p == player => {
                let key = game.infoset_key(&f.state);
                let n = game.num_actions(&f.state);
                let key_id = *key_ids.entry(key.clone()).or_insert_with(|| {
                    keys.push(key);
                    groups.push((f.own_depth, Vec::new()));
                    keys.len() - 1
                });
                groups[key_id].1.push((idx, f.omega));
                arena.push(BrNode::Own { key_id, children: Vec::new() });
                let mut children = Vec::with_capacity(n);
                for a in 0..n {
                    let child = build(
                        game,
                        profile,
                        player,
                        cap,
                        arena,
                        key_ids,
                        keys,
                        groups,
                        Frame {
                            state: game.apply(&f.state, a),
                            omega: f.omega,
                            own_depth: f.own_depth + 1,
                        },
                    )?;
                    children.push(child);
                }
                if let BrNode::Own { children: c, .. } = &mut arena[idx] {
                    *c = children;
                }
            }
            NodeKind::Decision(opp) => {
                let key = game.infoset_key(&f.state);
                let n = game.num_actions(&f.state);
                let policy = profile.policy_or_uniform(opp, &key, n);
                arena.push(BrNode::Mix(Vec::new()));
                let mut children = Vec::with_capacity(n);
                for a in 0..n {
                    let p = policy.probs()[a];
                    let child = build(
                        game,
                        profile,
                        player,
                        cap,
                        arena,
                        key_ids,
                        keys,
                        groups,
                        Frame {
                            state: game.apply(&f.state, a),
                            omega: f.omega * p,
                            own_depth: f.own_depth,
                        },
                    )?;
                    children.push((child, p));
                }
                arena[idx] = BrNode::Mix(children);
            }
        }
        Ok(idx)
    }

    build(
        game,
        profile,
        player,
        cap,
        &mut arena,
        &mut key_ids,
        &mut keys,
        &mut groups,
        Frame { state: game.root(), omega: 1.0, own_depth: 0 },
    )?;

    // Pass 2: decide infosets deepest-first; deeper decisions are fixed when
    // shallower cfvs are evaluated, so the memo below is never invalidated.
    let mut order: Vec<usize> = (0..groups.len()).collect();
    order.sort_by_key(|&k| std::cmp::Reverse(groups[k].0));
    let mut choice: Vec<usize> = vec![usize::MAX; groups.len()];
    let mut memo: Vec<f64> = vec![f64::NAN; arena.len()];

    fn value(arena: &[BrNode], choice: &[usize], memo: &mut [f64], idx: usize) -> f64 {
        if !memo[idx].is_nan() {
            return memo[idx];
        }
        let v = match &arena[idx] {
            BrNode::Terminal(u) => *u,
            BrNode::Mix(children) => children
                .iter()
                .map(|&(c, p)| if p == 0.0 { 0.0 } else { p * value(arena, choice, memo, c) })
                .sum(),
            BrNode::Own { key_id, children } => {
                let a = choice[*key_id];
                debug_assert!(a != usize::MAX, "deeper infoset undecided");
                value(arena, choice, memo, children[a])
            }
        };
        memo[idx] = v;
        v
    }

    for key_id in order {
        let num_actions = match &arena[groups[key_id].1[0].0] {
            BrNode::Own { children, .. } => children.len(),
            _ => unreachable!(),
        };
        let mut best = (0usize, f64::NEG_INFINITY);
        for a in 0..num_actions {
            let mut cfv = 0.0;
            for &(node, omega) in &groups[key_id].1 {
                if omega == 0.0 {
                    continue;
                }
                let child = match &arena[node] {
                    BrNode::Own { children, .. } => children[a],
                    _ => unreachable!(),
                };
                cfv += omega * value(&arena, &choice, &mut memo, child);
            }
            if cfv > best.1 {
                best = (a, cfv);
            }
        }
        choice[key_id] = best.0;
    }

    let br_value = value(&arena, &choice, &mut memo, 0);
    let mut strategy = StrategyProfile::new(game.num_players());
    for (key_id, key) in keys.iter().enumerate() {
        let n = match &arena[groups[key_id].1[0].0] {
            BrNode::Own { children, .. } => children.len(),
            _ => unreachable!(),
        };
        strategy.insert(player, key.clone(), Policy::pure(n, choice[key_id]));
    }
    Ok((br_value, strategy))
}

/// Total and per-player exploitability of a profile.
#[derive(Debug, Clone, PartialEq)]
pub struct Exploitability {
    pub total: f64,
    pub per_player: Vec<f64>,
}

/// eps = sum_i [BR_i value - u_i(profile)]; >= 0 up to a 1e-9 numerical floor.
pub fn exploitability<G: Game>(game: &G, profile: &StrategyProfile) -> Result<Exploitability> {
    exploitability_capped(game, profile, DEFAULT_TREE_CAP)
}

pub fn exploitability_capped<G: Game>(
    game: &G,
    profile: &StrategyProfile,
    cap: u64,
) -> Result<Exploitability> {
    let ev = crate::game::expected_value(game, profile);
    let mut per_player = Vec::with_capacity(game.num_players());
    for p in 0..game.num_players() {
        let (br, _) = best_response_capped(game, profile, PlayerId(p), cap)?;
        per_player.push(br - ev[p]);
    }
    Ok(Exploitability { total: per_player.iter().sum(), per_player })
}

/// Node classification by pure-profile reach factors of the two players:
/// Red both reach, Green neither, Blue only the acting player, Yellow only
/// the others.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeColor {
    Red,
    Green,
    Blue,
    Yellow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ColorCounts {
    pub red: u64,
    pub green: u64,
    pub blue: u64,
    pub yellow: u64,
}

impl ColorCounts {
    /// Nodes a CFVFP pass must touch: red + blue + yellow.
    pub fn pass(&self) -> u64 {
        self.red + self.blue + self.yellow
    }

    pub fn all(&self) -> u64 {
        self.pass() + self.green
    }
}

#[derive(Debug, Clone, Default)]
pub struct ColorCensus {
    /// Decision-node counts per depth (depth 1 = root decision level).
    pub per_depth: Vec<ColorCounts>,
    pub totals: ColorCounts,
}

/// Classify every decision node of a 2-player game under a pure profile.
/// Chance nodes pass reach through and are not classified or counted.
pub fn census_by_color<G: Game>(game: &G, profile: &StrategyProfile) -> Result<ColorCensus> {
    if game.num_players() != 2 {
        return Err(Error::InvalidParams("color census requires 2 players".into()));
    }
    let mut census = ColorCensus::default();
    let mut stack: Vec<(G::State, [bool; 2], usize)> = vec![(game.root(), [true, true], 1)];
    while let Some((state, reach, depth)) = stack.pop() {
        match game.kind(&state) {
            NodeKind::Terminal => {}
            NodeKind::Chance => {
                for a in 0..game.num_actions(&state) {
                    stack.push((game.apply(&state, a), reach, depth));
                }
            }
            NodeKind::Decision(pl) => {
                let p = pl.0;
                let color = match (reach[p], reach[1 - p]) {
                    (true, true) => NodeColor::Red,
                    (false, false) => NodeColor::Green,
                    (true, false) => NodeColor::Blue,
                    (false, true) => NodeColor::Yellow,
                };
                if census.per_depth.len() < depth {
                    census.per_depth.resize(depth, ColorCounts::default());
                }
                let slot = &mut census.per_depth[depth - 1];
                let tot = &mut census.totals;
                match color {
                    NodeColor::Red => {
                        slot.red += 1;
                        tot.red += 1;
                    }
                    NodeColor::Green => {
                        slot.green += 1;
                        tot.green += 1;
                    }
                    NodeColor::Blue => {
                        slot.blue += 1;
                        tot.blue += 1;
                    }
                    NodeColor::Yellow => {
                        slot.yellow += 1;
                        tot.yellow += 1;
                    }
                }
                let key = game.infoset_key(&state);
                let n = game.num_actions(&state);
                let policy = profile.policy_or_uniform(pl, &key, n);
                if !policy.is_pure() {
                    return Err(Error::NotPureProfile(key.to_string()));
                }
                for a in 0..n {
                    let mut r2 = reach;
                    r2[p] = reach[p] && policy.probs()[a] == 1.0;
                    stack.push((game.apply(&state, a), r2, depth + 1));
                }
            }
        }
    }
    Ok(census)
}

/// Closed-form / recurrence census prediction for the complete alternating
/// tree with branching g and h decision levels. Counts are per level h.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CensusPrediction {
    pub branching: u64,
    pub levels: u64,
    pub red: u64,
    pub green: u64,
    pub blue: u64,
    pub yellow: u64,
    /// Touched nodes at level h: 1 + blue(h) + blue(h-1).
    pub pass: u64,
    /// Nodes in the whole h-level tree: (g^h - 1) / (g - 1).
    pub all: u64,
}

/// Evaluate the census recurrence (valid for all h >= 1); equals the closed
/// forms on their validity range.
pub fn predict_census(g: u64, h: u64) -> Result<CensusPrediction> {
    if g < 2 {
        return Err(Error::InvalidParams(format!("branching g={g} (need >= 2)")));
    }
    if h < 1 || h > 40 {
        return Err(Error::InvalidParams(format!("levels h={h} (need 1..=40)")));
    }
    let (mut red, mut green, mut blue, mut yellow) = (1u64, 0u64, 0u64, 0u64);
    let mut prev_blue = 0u64;
    for _ in 1..h {
        let nb = (g - 1) * red + g * yellow;
        let ng = g * green + (g - 1) * blue;
        let ny = blue;
        prev_blue = blue;
        blue = nb;
        green = ng;
        yellow = ny;
        red = 1;
    }
    let _ = prev_blue;
    let pass = red + blue + yellow;
    let mut all = 0u64;
    let mut pow = 1u64;
    for _ in 0..h {
        all += pow;
        pow = pow.saturating_mul(g);
    }
    Ok(CensusPrediction { branching: g, levels: h, red, green, blue, yellow, pass, all })
}

/// Closed form for blue nodes at level h (h >= 2):
/// (g-1) * sum_{i=0}^{floor((h-2)/2)} g^i.
pub fn closed_form_blue(g: u64, h: u64) -> u64 {
    if h < 2 {
        return 0;
    }
    let top = (h - 2) / 2;
    let mut s = 0u64;
    let mut pow = 1u64;
    for _ in 0..=top {
        s += pow;
        pow *= g;
    }
    (g - 1) * s
}

/// Closed form for touched nodes at level h (h >= 3):
/// 1 + closed_form_blue(g, h) + closed_form_blue(g, h-1).
pub fn closed_form_pass(g: u64, h: u64) -> u64 {
    1 + closed_form_blue(g, h) + closed_form_blue(g, h - 1)
}

/// Complete alternating-player tree: h decision levels of g actions each,
/// players alternate by level, no chance nodes, all payoffs zero.
pub struct SyntheticTree {
    pub branching: usize,
    pub levels: usize,
}

impl Game for SyntheticTree {
    type State = Vec<u8>;

    fn num_players(&self) -> usize {
        2
    }

    fn root(&self) -> Vec<u8> {
        Vec::new()
    }

    fn kind(&self, s: &Vec<u8>) -> NodeKind {
        if s.len() < self.levels {
            NodeKind::Decision(PlayerId(s.len() % 2))
        } else {
            NodeKind::Terminal
        }
    }

    fn num_actions(&self, _s: &Vec<u8>) -> usize {
        self.branching
    }

    fn apply(&self, s: &Vec<u8>, action: usize) -> Vec<u8> {
        let mut n = s.clone();
        n.push(action as u8);
        n
    }

    fn chance_probs(&self, _s: &Vec<u8>) -> Vec<f64> {
        Vec::new()
    }

    fn payoffs(&self, _s: &Vec<u8>) -> Vec<f64> {
        vec![0.0, 0.0]
    }

    fn infoset_key(&self, s: &Vec<u8>) -> InfoSetKey {
        InfoSetKey(s.clone())
    }
}

/// Per-infoset operation counts for x actions: CFVFP needs 2x+1 additions,
/// CFR 6x-2 additions and 3x multiplications.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OpCounts {
    pub cfvfp_additions: u64,
    pub cfr_additions: u64,
    pub cfr_multiplications: u64,
}

impl OpCounts {
    /// CFVFP ops over total CFR ops; tends to 2/9 as x grows.
    pub fn time_ratio(&self) -> f64 {
        self.cfvfp_additions as f64
            / (self.cfr_additions + self.cfr_multiplications) as f64
    }
}

pub fn op_count_model(x: u64) -> Result<OpCounts> {
    if x < 1 {
        return Err(Error::InvalidParams("x >= 1 required".into()));
    }
    Ok(OpCounts {
        cfvfp_additions: 2 * x + 1,
        cfr_additions: 6 * x - 2,
        cfr_multiplications: 3 * x,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::expected_value;
    use crate::games::kuhn::{kuhn_ext, KuhnExtParams};
    use crate::matrix::rps;
    use rand::Rng;
    use rand::SeedableRng;

    #[test]
    fn rps_uniform_best_response_is_zero() {
        let tree = rps().to_extensive();
        let profile = StrategyProfile::new(2);
        let (v, _) = best_response(&tree, &profile, PlayerId(0)).unwrap();
        assert!(v.abs() < 1e-12);
        let e = exploitability(&tree, &profile).unwrap();
        assert!(e.total.abs() < 1e-12);
    }

    /// Brute-force oracle: enumerate all of a player's pure strategies and
    /// evaluate each against the profile directly.
    fn brute_force_br<G: Game>(game: &G, profile: &StrategyProfile, player: PlayerId) -> f64 {
        // collect infoset keys and action counts
        let mut keys: Vec<(InfoSetKey, usize)> = Vec::new();
        let mut stack = vec![game.root()];
        while let Some(s) = stack.pop() {
            match game.kind(&s) {
                NodeKind::Terminal => {}
                NodeKind::Chance | NodeKind::Decision(_) => {
                    if let NodeKind::Decision(p) = game.kind(&s) {
                        if p == player {
                            let k = game.infoset_key(&s);
                            if !keys.iter().any(|(kk, _)| *kk == k) {
                                keys.push((k, game.num_actions(&s)));
                            }
                        }
                    }
                    for a in 0..game.num_actions(&s) {
                        stack.push(game.apply(&s, a));
                    }
                }
            }
        }
        let mut best = f64::NEG_INFINITY;
        let combos: usize = keys.iter().map(|(_, n)| n).product();
        for mut c in 0..combos {
            let mut prof = profile.clone();
            for (k, n) in &keys {
                prof.insert(player, k.clone(), Policy::pure(*n, c % n));
                c /= n;
            }
            best = best.max(expected_value(game, &prof)[player.0]);
        }
        best
    }

    #[test]
    fn kuhn_best_response_matches_brute_force() {
        let g = kuhn_ext(KuhnExtParams { cards: 3, bet_sizes: 1, raise_cap: 1 }).unwrap();
        let uniform = StrategyProfile::new(2);
        for p in 0..2 {
            let (fast, strategy) = best_response(&g, &uniform, PlayerId(p)).unwrap();
            let brute = brute_force_br(&g, &uniform, PlayerId(p));
            assert!((fast - brute).abs() < 1e-12, "P{p}: {fast} vs {brute}");
            // the returned strategy achieves the value
            let mut prof = uniform.clone();
            for (pl, k, pol) in strategy.iter_sorted() {
                prof.insert(pl, k.clone(), pol.clone());
            }
            let achieved = expected_value(&g, &prof)[p];
            assert!((achieved - fast).abs() < 1e-12);
        }
    }

    #[test]
    fn br_dominates_expected_value_on_random_profiles() {
        let g = kuhn_ext(KuhnExtParams { cards: 3, bet_sizes: 2, raise_cap: 2 }).unwrap();
        let mut rng = crate::rng::SolverRng::seed_from_u64(4);
        for _ in 0..10 {
            let mut profile = StrategyProfile::new(2);
            let mut stack = vec![g.root()];
            while let Some(s) = stack.pop() {
                if let NodeKind::Decision(p) = g.kind(&s) {
                    let n = g.num_actions(&s);
                    let mut probs: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() + 1e-3).collect();
                    let tot: f64 = probs.iter().sum();
                    probs.iter_mut().for_each(|x| *x /= tot);
                    profile.insert(p, g.infoset_key(&s), Policy(probs));
                }
                if g.kind(&s) != NodeKind::Terminal {
                    for a in 0..g.num_actions(&s) {
                        stack.push(g.apply(&s, a));
                    }
                }
            }
            let ev = expected_value(&g, &profile);
            let e = exploitability(&g, &profile).unwrap();
            for p in 0..2 {
                let (br, _) = best_response(&g, &profile, PlayerId(p)).unwrap();
                assert!(br >= ev[p] - 1e-9);
            }
            assert!(e.total >= -1e-9);
        }
    }

    #[test]
    fn predict_census_base_cases_and_formula() {
        let p = predict_census(3, 4).unwrap();
        assert_eq!(p.red, 1);
        assert_eq!(p.blue, 8);
        assert_eq!(p.pass, 11);
        assert_eq!(p.all, 40);
        for g in 2..=4 {
            for h in 1..=9 {
                let p = predict_census(g, h).unwrap();
                assert_eq!(p.red, 1, "red is 1 at every level");
                if h >= 2 {
                    assert_eq!(p.blue, closed_form_blue(g, h), "g={g} h={h}");
                    assert_eq!(p.yellow, closed_form_blue(g, h - 1), "yellow = prev blue");
                }
                if h >= 3 {
                    assert_eq!(p.pass, closed_form_pass(g, h));
                }
            }
        }
        assert!(predict_census(1, 3).is_err());
    }

    #[test]
    fn synthetic_tree_census_matches_prediction() {
        let g = 3u64;
        let h = 4u64;
        let tree = SyntheticTree { branching: g as usize, levels: h as usize };
        // arbitrary pure profile
        let mut profile = StrategyProfile::new(2);
        let mut rng = crate::rng::SolverRng::seed_from_u64(8);
        let mut stack = vec![tree.root()];
        while let Some(s) = stack.pop() {
            if let NodeKind::Decision(p) = tree.kind(&s) {
                let n = tree.num_actions(&s);
                profile.insert(p, tree.infoset_key(&s), Policy::pure(n, rng.gen_range(0..n)));
                for a in 0..n {
                    stack.push(tree.apply(&s, a));
                }
            }
        }
        let census = census_by_color(&tree, &profile).unwrap();
        for lvl in 1..=h {
            let p = predict_census(g, lvl).unwrap();
            let c = census.per_depth[(lvl - 1) as usize];
            assert_eq!((c.red, c.blue, c.yellow), (p.red, p.blue, p.yellow), "level {lvl}");
            assert_eq!(c.pass(), p.pass);
        }
        // root is red
        assert_eq!(census.per_depth[0].red, 1);
    }

    #[test]
    fn census_rejects_mixed_profiles() {
        let tree = SyntheticTree { branching: 2, levels: 2 };
        let profile = StrategyProfile::new(2); // defaults to uniform = mixed
        assert!(matches!(census_by_color(&tree, &profile), Err(Error::NotPureProfile(_))));
    }

    #[test]
    fn op_count_values() {
        let c = op_count_model(2).unwrap();
        assert_eq!((c.cfvfp_additions, c.cfr_additions, c.cfr_multiplications), (5, 10, 6));
        let c = op_count_model(1).unwrap();
        assert_eq!((c.cfvfp_additions, c.cfr_additions, c.cfr_multiplications), (3, 4, 3));
        let big = op_count_model(1_000_000).unwrap();
        assert!((big.time_ratio() - 2.0 / 9.0).abs() < 1e-5);
        assert!(op_count_model(0).is_err());
    }
}
