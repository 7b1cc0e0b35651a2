//! Kuhn-extension poker: x cards, y bet sizes on the geometric ladder
//! [1, 2, 4, ...], up to z bets/raises in the single betting round.
//!
//! Each player antes 1 chip and is dealt one of x distinct ranks (ordered
//! deals, uniform). A raise must be strictly larger on the ladder than the
//! previous bet; z caps the total number of bets+raises. Showdown: higher
//! rank takes the pot.

use crate::error::{Error, Result};
use crate::game::{Game, InfoSetKey, NodeKind, PlayerId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KuhnExtParams {
    pub cards: usize,
    pub bet_sizes: usize,
    pub raise_cap: usize,
}

impl KuhnExtParams {
    pub fn validate(&self) -> Result<()> {
        if self.cards < 3 || self.cards > 200 {
            return Err(Error::InvalidParams(format!("kuhn cards x={} (need 3..=200)", self.cards)));
        }
        if self.bet_sizes < 1 || self.bet_sizes > 20 {
            return Err(Error::InvalidParams(format!("kuhn bet sizes y={}", self.bet_sizes)));
        }
        if self.raise_cap < 1 || self.raise_cap > 20 {
            return Err(Error::InvalidParams(format!("kuhn raise cap z={}", self.raise_cap)));
        }
        Ok(())
    }
}

const ACT_CHECK: u8 = b'k';
const ACT_FOLD: u8 = b'f';
const ACT_CALL: u8 = b'c';
const ACT_BET: u8 = 0xb0; // 0xb0 + ladder index

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Terminal {
    Fold { folder: u8 },
    Showdown,
}

#[derive(Debug, Clone)]
pub struct KuhnState {
    cards: Option<[u8; 2]>,
    hist: Vec<u8>,
    to_move: u8,
    raises: u8,
    last_size: i8,
    facing: bool,
    level: u64,
    contrib: [u64; 2],
    terminal: Option<Terminal>,
}

pub struct KuhnExt {
    params: KuhnExtParams,
}

/// Build the Kuhn-extension game; see [`KuhnExtParams`].
pub fn kuhn_ext(params: KuhnExtParams) -> Result<KuhnExt> {
    params.validate()?;
    Ok(KuhnExt { params })
}

impl KuhnExt {
    pub fn params(&self) -> KuhnExtParams {
        self.params
    }

    fn ladder(&self, idx: usize) -> u64 {
        1u64 << idx
    }

    fn deal(&self, a: usize) -> [u8; 2] {
        let x = self.params.cards;
        let c0 = a / (x - 1);
        let r = a % (x - 1);
        let c1 = if r >= c0 { r + 1 } else { r };
        [c0 as u8, c1 as u8]
    }

    fn raise_count(&self, s: &KuhnState) -> usize {
        if (s.raises as usize) < self.params.raise_cap {
            self.params.bet_sizes - (s.last_size + 1) as usize
        } else {
            0
        }
    }
}

impl Game for KuhnExt {
    type State = KuhnState;

    fn num_players(&self) -> usize {
        2
    }

    fn root(&self) -> KuhnState {
        KuhnState {
            cards: None,
            hist: Vec::new(),
            to_move: 0,
            raises: 0,
            last_size: -1,
            facing: false,
            level: 1,
            contrib: [1, 1],
            terminal: None,
        }
    }

    fn kind(&self, s: &KuhnState) -> NodeKind {
        if s.terminal.is_some() {
            NodeKind::Terminal
        } else if s.cards.is_none() {
            NodeKind::Chance
        } else {
            NodeKind::Decision(PlayerId(s.to_move as usize))
        }
    }

    fn num_actions(&self, s: &KuhnState) -> usize {
        if s.cards.is_none() {
            let x = self.params.cards;
            x * (x - 1)
        } else if s.facing {
            2 + self.raise_count(s)
        } else {
            1 + self.params.bet_sizes
        }
    }

    fn apply(&self, s: &KuhnState, action: usize) -> KuhnState {
        let mut n = s.clone();
        if s.cards.is_none() {
            n.cards = Some(self.deal(action));
            return n;
        }
        let me = s.to_move as usize;
        if s.facing {
            match action {
                0 => {
                    n.hist.push(ACT_FOLD);
                    n.terminal = Some(Terminal::Fold { folder: s.to_move });
                }
                1 => {
                    n.hist.push(ACT_CALL);
                    n.contrib[me] = n.level;
                    n.terminal = Some(Terminal::Showdown);
                }
                _ => {
                    let idx = (s.last_size + 1) as usize + (action - 2);
                    n.hist.push(ACT_BET + idx as u8);
                    n.level += self.ladder(idx);
                    n.contrib[me] = n.level;
                    n.raises += 1;
                    n.last_size = idx as i8;
                    n.to_move = 1 - s.to_move;
                }
            }
        } else if action == 0 {
            n.hist.push(ACT_CHECK);
            if s.hist.last() == Some(&ACT_CHECK) {
                n.terminal = Some(Terminal::Showdown);
            } else {
                n.to_move = 1 - s.to_move;
            }
        } else {
            let idx = action - 1;
            n.hist.push(ACT_BET + idx as u8);
            n.level += self.ladder(idx);
            n.contrib[me] = n.level;
            n.raises += 1;
            n.last_size = idx as i8;
            n.facing = true;
            n.to_move = 1 - s.to_move;
        }
        n
    }

    fn chance_probs(&self, _s: &KuhnState) -> Vec<f64> {
        let x = self.params.cards;
        let n = x * (x - 1);
        vec![1.0 / n as f64; n]
    }

    fn payoffs(&self, s: &KuhnState) -> Vec<f64> {
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
                let stake = s.level as f64;
                if cards[0] > cards[1] {
                    vec![stake, -stake]
                } else {
                    vec![-stake, stake]
                }
            }
        }
    }

    fn infoset_key(&self, s: &KuhnState) -> InfoSetKey {
        let cards = s.cards.expect("key after deal");
        let mut bytes = Vec::with_capacity(1 + s.hist.len());
        bytes.push(cards[s.to_move as usize]);
        bytes.extend_from_slice(&s.hist);
        InfoSetKey(bytes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{enumerate_tree, validate};

    fn census(x: usize, y: usize, z: usize) -> (u64, u64) {
        let g = kuhn_ext(KuhnExtParams { cards: x, bet_sizes: y, raise_cap: z }).unwrap();
        let c = enumerate_tree(&g).unwrap();
        (c.total_infosets(), c.total_nodes)
    }

    #[test]
    fn classic_kuhn_census() {
        assert_eq!(census(3, 1, 1), (12, 55));
    }

    #[test]
    fn extension_census_rows() {
        assert_eq!(census(3, 3, 3), (48, 271));
        assert_eq!(census(7, 3, 3), (112, 1891));
    }

    #[test]
    fn classic_kuhn_payoffs() {
        let g = kuhn_ext(KuhnExtParams { cards: 3, bet_sizes: 1, raise_cap: 1 }).unwrap();
        // deal 0 = cards [0, 1]; P0 bets, P1 calls -> P1 wins 2
        let s = g.apply(&g.root(), 0);
        let s = g.apply(&s, 1); // bet 1
        let s = g.apply(&s, 1); // call
        assert_eq!(g.payoffs(&s), vec![-2.0, 2.0]);
        // bet then fold -> P0 wins 1
        let s = g.apply(&g.root(), 0);
        let s = g.apply(&s, 1);
        let s = g.apply(&s, 0);
        assert_eq!(g.payoffs(&s), vec![1.0, -1.0]);
        // check-check -> showdown for 1
        let s = g.apply(&g.root(), 0);
        let s = g.apply(&s, 0);
        let s = g.apply(&s, 0);
        assert_eq!(g.payoffs(&s), vec![-1.0, 1.0]);
    }

    #[test]
    fn invalid_params_rejected() {
        assert!(kuhn_ext(KuhnExtParams { cards: 2, bet_sizes: 1, raise_cap: 1 }).is_err());
        assert!(kuhn_ext(KuhnExtParams { cards: 3, bet_sizes: 0, raise_cap: 1 }).is_err());
    }

    #[test]
    fn perfect_recall_and_invariants() {
        let g = kuhn_ext(KuhnExtParams { cards: 3, bet_sizes: 2, raise_cap: 2 }).unwrap();
        validate(&g, 1_000_000).unwrap();
    }

    #[test]
    fn raise_ladder_is_strictly_increasing_prefix() {
        let g = kuhn_ext(KuhnExtParams { cards: 3, bet_sizes: 3, raise_cap: 3 }).unwrap();
        // P0 bets size 4 (index 2): the facing player may only call or fold.
        let s = g.apply(&g.root(), 0);
        let s = g.apply(&s, 3); // bet index 2
        assert_eq!(g.num_actions(&s), 2);
        // P0 bets size 1 (index 0): raises of index 1 and 2 remain.
        let s = g.apply(&g.apply(&g.root(), 0), 1);
        assert_eq!(g.num_actions(&s), 4);
    }
}
