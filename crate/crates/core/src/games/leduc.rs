//! Leduc-extension poker: x ranks with two copies each, two betting rounds
//! with one public card revealed in between.
//!
//! Each player antes 1 chip and receives one private card. A bet or raise in
//! round 1 is one of the y ladder sizes [1, 2, 4, ...]; round 2 sizes are
//! doubled. A raise must match the previous bet size, and each round allows
//! the opening bet plus up to z raises. The round-1 opener may also fold
//! outright (forfeiting the ante). Showdown: pairing the public card wins,
//! otherwise the higher rank; equal ranks split the pot.

use crate::error::{Error, Result};
use crate::game::{Game, InfoSetKey, NodeKind, PlayerId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LeducExtParams {
    pub cards: usize,
    pub bet_sizes: usize,
    pub raise_cap: usize,
}

impl LeducExtParams {
    pub fn validate(&self) -> Result<()> {
        if self.cards < 3 || self.cards > 200 {
            return Err(Error::InvalidParams(format!("leduc ranks x={} (need 3..=200)", self.cards)));
        }
        if self.bet_sizes < 1 || self.bet_sizes > 20 {
            return Err(Error::InvalidParams(format!("leduc bet sizes y={}", self.bet_sizes)));
        }
        if self.raise_cap < 1 || self.raise_cap > 20 {
            return Err(Error::InvalidParams(format!("leduc raise cap z={}", self.raise_cap)));
        }
        Ok(())
    }
}

const ACT_CHECK: u8 = b'k';
const ACT_FOLD: u8 = b'f';
const ACT_CALL: u8 = b'c';
const ACT_BET: u8 = 0xb0;
const SEP_PUBLIC: u8 = 0xfe;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Terminal {
    Fold { folder: u8 },
    Showdown,
}

#[derive(Debug, Clone)]
pub struct LeducState {
    cards: Option<[u8; 2]>,
    public: Option<u8>,
    round: u8,
    hist: [Vec<u8>; 2],
    to_move: u8,
    aggressive: u8,
    last_size: i8,
    facing: bool,
    awaiting_public: bool,
    level: u64,
    contrib: [u64; 2],
    terminal: Option<Terminal>,
}

pub struct LeducExt {
    params: LeducExtParams,
}

/// Build the Leduc-extension game; see [`LeducExtParams`].
pub fn leduc_ext(params: LeducExtParams) -> Result<LeducExt> {
    params.validate()?;
    Ok(LeducExt { params })
}

impl LeducExt {
    pub fn params(&self) -> LeducExtParams {
        self.params
    }

    fn ladder(&self, round: u8, idx: usize) -> u64 {
        (1u64 << idx) << round
    }

    /// Total aggressive actions allowed per round: opening bet + z raises.
    fn round_cap(&self) -> u8 {
        (self.params.raise_cap + 1) as u8
    }

    fn deal(&self, a: usize) -> [u8; 2] {
        let x = self.params.cards;
        [(a / x) as u8, (a % x) as u8]
    }

    fn remaining_public(&self, s: &LeducState) -> Vec<(u8, u32)> {
        let cards = s.cards.expect("public deal after private deal");
        let mut out = Vec::with_capacity(self.params.cards);
        for r in 0..self.params.cards as u8 {
            let used = (cards[0] == r) as u32 + (cards[1] == r) as u32;
            if used < 2 {
                out.push((r, 2 - used));
            }
        }
        out
    }

    fn can_raise(&self, s: &LeducState) -> bool {
        s.aggressive < self.round_cap()
    }

    fn end_round(&self, n: &mut LeducState) {
        if n.round == 0 {
            n.awaiting_public = true;
        } else {
            n.terminal = Some(Terminal::Showdown);
        }
    }
}

impl Game for LeducExt {
    type State = LeducState;

    fn num_players(&self) -> usize {
        2
    }

    fn root(&self) -> LeducState {
        LeducState {
            cards: None,
            public: None,
            round: 0,
            hist: [Vec::new(), Vec::new()],
            to_move: 0,
            aggressive: 0,
            last_size: -1,
            facing: false,
            awaiting_public: false,
            level: 1,
            contrib: [1, 1],
            terminal: None,
        }
    }

    fn kind(&self, s: &LeducState) -> NodeKind {
        if s.terminal.is_some() {
            NodeKind::Terminal
        } else if s.cards.is_none() || s.awaiting_public {
            NodeKind::Chance
        } else {
            NodeKind::Decision(PlayerId(s.to_move as usize))
        }
    }

    fn num_actions(&self, s: &LeducState) -> usize {
        if s.cards.is_none() {
            self.params.cards * self.params.cards
        } else if s.awaiting_public {
            self.remaining_public(s).len()
        } else if s.facing {
            2 + if self.can_raise(s) { 1 } else { 0 }
        } else {
            let start_fold = (s.round == 0 && s.hist[0].is_empty()) as usize;
            start_fold + 1 + self.params.bet_sizes
        }
    }

    fn apply(&self, s: &LeducState, action: usize) -> LeducState {
        let mut n = s.clone();
        if s.cards.is_none() {
            n.cards = Some(self.deal(action));
            return n;
        }
        if s.awaiting_public {
            n.public = Some(self.remaining_public(s)[action].0);
            n.awaiting_public = false;
            n.round = 1;
            n.to_move = 0;
            n.aggressive = 0;
            n.last_size = -1;
            n.facing = false;
            return n;
        }
        let me = s.to_move as usize;
        let r = s.round as usize;
        if s.facing {
            match action {
                0 => {
                    n.hist[r].push(ACT_FOLD);
                    n.terminal = Some(Terminal::Fold { folder: s.to_move });
                }
                1 => {
                    n.hist[r].push(ACT_CALL);
                    n.contrib[me] = n.level;
                    self.end_round(&mut n);
                }
                _ => {
                    let idx = s.last_size as usize;
                    n.hist[r].push(ACT_BET + idx as u8);
                    n.level += self.ladder(s.round, idx);
                    n.contrib[me] = n.level;
                    n.aggressive += 1;
                    n.to_move = 1 - s.to_move;
                }
            }
            return n;
        }
        let start_fold = s.round == 0 && s.hist[0].is_empty();
        let mut a = action;
        if start_fold {
            if a == 0 {
                n.hist[r].push(ACT_FOLD);
                n.terminal = Some(Terminal::Fold { folder: s.to_move });
                return n;
            }
            a -= 1;
        }
        if a == 0 {
            n.hist[r].push(ACT_CHECK);
            if s.hist[r].last() == Some(&ACT_CHECK) {
                self.end_round(&mut n);
            } else {
                n.to_move = 1 - s.to_move;
            }
        } else {
            let idx = a - 1;
            n.hist[r].push(ACT_BET + idx as u8);
            n.level += self.ladder(s.round, idx);
            n.contrib[me] = n.level;
            n.aggressive += 1;
            n.last_size = idx as i8;
            n.facing = true;
            n.to_move = 1 - s.to_move;
        }
        n
    }

    fn chance_probs(&self, s: &LeducState) -> Vec<f64> {
        if s.cards.is_none() {
            let x = self.params.cards;
            let deck = 2.0 * x as f64;
            let denom = deck * (deck - 1.0);
            let mut probs = Vec::with_capacity(x * x);
            for a in 0..x * x {
                let d = self.deal(a);
                let ways = if d[0] == d[1] { 2.0 } else { 4.0 };
                probs.push(ways / denom);
            }
            probs
        } else {
            let rem = self.remaining_public(s);
            let total: u32 = rem.iter().map(|&(_, c)| c).sum();
            rem.iter().map(|&(_, c)| c as f64 / total as f64).collect()
        }
    }

    fn payoffs(&self, s: &LeducState) -> Vec<f64> {
        let cards = s.cards.expect("terminal after deal");
        match s.terminal.expect("payoffs at terminal") {
            Terminal::Fold { folder } => {
                let f = folder as usize;
                let stake = s.contrib[f] as f64;
                let mut u = vec![0.0; 2];
                u[f] = -stake;
                u[1 - f] = stake;
                u
            }
            Terminal::Showdown => {
                let public = s.public.expect("showdown after public card");
                let stake = s.level as f64;
                let pair0 = cards[0] == public;
                let pair1 = cards[1] == public;
                let cmp = if pair0 != pair1 {
                    if pair0 { std::cmp::Ordering::Greater } else { std::cmp::Ordering::Less }
                } else {
                    cards[0].cmp(&cards[1])
                };
                match cmp {
                    std::cmp::Ordering::Greater => vec![stake, -stake],
                    std::cmp::Ordering::Less => vec![-stake, stake],
                    std::cmp::Ordering::Equal => vec![0.0, 0.0],
                }
            }
        }
    }

    fn infoset_key(&self, s: &LeducState) -> InfoSetKey {
        let cards = s.cards.expect("key after deal");
        let mut bytes = Vec::with_capacity(4 + s.hist[0].len() + s.hist[1].len());
        bytes.push(cards[s.to_move as usize]);
        bytes.extend_from_slice(&s.hist[0]);
        if let Some(p) = s.public {
            bytes.push(SEP_PUBLIC);
            bytes.push(p);
            bytes.extend_from_slice(&s.hist[1]);
        }
        InfoSetKey(bytes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{enumerate_tree, validate};

    fn census(x: usize, y: usize, z: usize) -> (u64, u64) {
        let g = leduc_ext(LeducExtParams { cards: x, bet_sizes: y, raise_cap: z }).unwrap();
        let c = enumerate_tree(&g).unwrap();
        (c.total_infosets(), c.total_nodes)
    }

    #[test]
    fn three_rank_census() {
        assert_eq!(census(3, 1, 1), (288, 1945));
    }

    #[test]
    fn multi_size_census() {
        assert_eq!(census(3, 3, 1), (1680, 12529));
    }

    #[test]
    fn perfect_recall_and_invariants() {
        let g = leduc_ext(LeducExtParams { cards: 3, bet_sizes: 1, raise_cap: 1 }).unwrap();
        validate(&g, 1_000_000).unwrap();
    }

    #[test]
    fn pair_beats_high_card() {
        let g = leduc_ext(LeducExtParams { cards: 3, bet_sizes: 1, raise_cap: 1 }).unwrap();
        // deal: P0 rank 0, P1 rank 2 (deal index 0*3+2)
        let s = g.apply(&g.root(), 2);
        // round 1: check (action 1 at the start node due to leading fold), check
        let s = g.apply(&s, 1);
        let s = g.apply(&s, 0);
        // public card: remaining ranks are 0,1,2; pick rank 0 -> P0 pairs
        assert_eq!(g.num_actions(&s), 3);
        let s = g.apply(&s, 0);
        // round 2: check, check -> showdown, P0 wins the 2-chip pot
        let s = g.apply(&s, 0);
        let s = g.apply(&s, 0);
        assert_eq!(g.payoffs(&s), vec![1.0, -1.0]);
    }

    #[test]
    fn split_pot_on_equal_ranks() {
        let g = leduc_ext(LeducExtParams { cards: 3, bet_sizes: 1, raise_cap: 1 }).unwrap();
        // both players hold rank 1 (deal index 1*3+1), public must be 0 or 2
        let s = g.apply(&g.root(), 4);
        let s = g.apply(&s, 1);
        let s = g.apply(&s, 0);
        assert_eq!(g.num_actions(&s), 2);
        let s = g.apply(&s, 0);
        let s = g.apply(&s, 0);
        let s = g.apply(&s, 0);
        assert_eq!(g.payoffs(&s), vec![0.0, 0.0]);
    }

    #[test]
    fn opener_may_fold_the_ante() {
        let g = leduc_ext(LeducExtParams { cards: 3, bet_sizes: 1, raise_cap: 1 }).unwrap();
        let s = g.apply(&g.root(), 0);
        let s = g.apply(&s, 0); // fold at the start of round 1
        assert_eq!(g.payoffs(&s), vec![-1.0, 1.0]);
    }
}
