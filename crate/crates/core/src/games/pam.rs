//! Princess-and-monster pursuit game on a 3x3 grid with the upper-left and
//! upper-right rooms blocked.
//!
//! Both players pick a birth room (hidden from each other); placement counts
//! as round 1 and co-located placements end the game immediately. Each later
//! round both players move one step (stay/up/down/left/right, filtered by
//! passability), simultaneously in effect: the princess's move is hidden
//! until the monster has moved too. Capture means occupying the same room
//! after a round; passing through each other is not capture. The princess
//! scores +r when the game ends in round r (capture or survival to round N),
//! the monster -r.

use crate::error::{Error, Result};
use crate::game::{Game, InfoSetKey, NodeKind, PlayerId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PamParams {
    pub rounds: usize,
}

pub const PRINCESS: PlayerId = PlayerId(0);
pub const MONSTER: PlayerId = PlayerId(1);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Phase {
    Place(u8),
    Move(u8),
    Done { round: u8 },
}

#[derive(Debug, Clone)]
pub struct PamState {
    phase: Phase,
    round: u8,
    pos: [u8; 2],
    pending: u8,
    hist: [Vec<u8>; 2],
}

pub struct Pam {
    rounds: u8,
    cells: Vec<(u8, u8)>,
    moves: Vec<Vec<u8>>,
}

/// The paper's dungeon: 3x3 grid, rooms (0,0) and (0,2) inaccessible.
pub fn pam(params: PamParams) -> Result<Pam> {
    Pam::custom(3, 3, &[(0, 0), (0, 2)], params.rounds)
}

impl Pam {
    /// Custom grid variant (used by tests for degenerate dungeons).
    pub fn custom(
        width: usize,
        height: usize,
        blocked: &[(usize, usize)],
        rounds: usize,
    ) -> Result<Pam> {
        if rounds < 1 || rounds > 16 {
            return Err(Error::InvalidParams(format!("pam rounds={rounds} (need 1..=16)")));
        }
        if width == 0 || height == 0 || width > 15 || height > 15 {
            return Err(Error::InvalidParams(format!("pam grid {width}x{height}")));
        }
        let mut cells = Vec::new();
        for r in 0..height {
            for c in 0..width {
                if !blocked.contains(&(r, c)) {
                    cells.push((r as u8, c as u8));
                }
            }
        }
        if cells.is_empty() {
            return Err(Error::InvalidParams("no passable rooms".into()));
        }
        let idx_of = |r: i32, c: i32| -> Option<u8> {
            if r < 0 || c < 0 || r >= height as i32 || c >= width as i32 {
                return None;
            }
            cells.iter().position(|&(cr, cc)| (cr as i32, cc as i32) == (r, c)).map(|i| i as u8)
        };
        let mut moves = Vec::with_capacity(cells.len());
        for &(r, c) in &cells {
            let mut m = vec![cells.iter().position(|&x| x == (r, c)).unwrap() as u8];
            for (dr, dc) in [(-1i32, 0i32), (1, 0), (0, -1), (0, 1)] {
                if let Some(i) = idx_of(r as i32 + dr, c as i32 + dc) {
                    m.push(i);
                }
            }
            moves.push(m);
        }
        Ok(Pam { rounds: rounds as u8, cells, moves })
    }

    pub fn num_rooms(&self) -> usize {
        self.cells.len()
    }
}

impl Game for Pam {
    type State = PamState;

    fn num_players(&self) -> usize {
        2
    }

    fn root(&self) -> PamState {
        PamState {
            phase: Phase::Place(0),
            round: 1,
            pos: [0, 0],
            pending: 0,
            hist: [Vec::new(), Vec::new()],
        }
    }

    fn kind(&self, s: &PamState) -> NodeKind {
        match s.phase {
            Phase::Place(p) | Phase::Move(p) => NodeKind::Decision(PlayerId(p as usize)),
            Phase::Done { .. } => NodeKind::Terminal,
        }
    }

    fn num_actions(&self, s: &PamState) -> usize {
        match s.phase {
            Phase::Place(_) => self.cells.len(),
            Phase::Move(p) => self.moves[s.pos[p as usize] as usize].len(),
            Phase::Done { .. } => 0,
        }
    }

    fn apply(&self, s: &PamState, action: usize) -> PamState {
        let mut n = s.clone();
        match s.phase {
            Phase::Place(0) => {
                n.pos[0] = action as u8;
                n.hist[0].push(action as u8);
                n.phase = Phase::Place(1);
            }
            Phase::Place(_) => {
                n.pos[1] = action as u8;
                n.hist[1].push(action as u8);
                if n.pos[0] == n.pos[1] || self.rounds == 1 {
                    n.phase = Phase::Done { round: 1 };
                } else {
                    n.round = 2;
                    n.phase = Phase::Move(0);
                }
            }
            Phase::Move(0) => {
                n.pending = self.moves[s.pos[0] as usize][action];
                n.hist[0].push(action as u8);
                n.phase = Phase::Move(1);
            }
            Phase::Move(_) => {
                n.pos = [s.pending, self.moves[s.pos[1] as usize][action]];
                n.hist[1].push(action as u8);
                if n.pos[0] == n.pos[1] || s.round == self.rounds {
                    n.phase = Phase::Done { round: s.round };
                } else {
                    n.round = s.round + 1;
                    n.phase = Phase::Move(0);
                }
            }
            Phase::Done { .. } => unreachable!("apply at terminal"),
        }
        n
    }

    fn chance_probs(&self, _s: &PamState) -> Vec<f64> {
        Vec::new()
    }

    fn payoffs(&self, s: &PamState) -> Vec<f64> {
        match s.phase {
            Phase::Done { round } => vec![round as f64, -(round as f64)],
            _ => unreachable!("payoffs at non-terminal"),
        }
    }

    fn infoset_key(&self, s: &PamState) -> InfoSetKey {
        match s.phase {
            Phase::Place(p) | Phase::Move(p) => InfoSetKey(s.hist[p as usize].clone()),
            Phase::Done { .. } => unreachable!("key at terminal"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{enumerate_tree, validate};

    #[test]
    fn four_round_census() {
        let g = pam(PamParams { rounds: 4 }).unwrap();
        let c = enumerate_tree(&g).unwrap();
        assert_eq!((c.total_infosets(), c.total_nodes), (224, 68815));
    }

    #[test]
    fn degenerate_single_room_is_immediate_capture() {
        // 1x1 grid: both players are forced to the same room at placement.
        let g = Pam::custom(1, 1, &[], 1).unwrap();
        let s = g.apply(&g.root(), 0);
        let s = g.apply(&s, 0);
        assert_eq!(g.kind(&s), NodeKind::Terminal);
        assert_eq!(g.payoffs(&s), vec![1.0, -1.0]);
    }

    #[test]
    fn capture_round_is_the_princess_payoff() {
        let g = pam(PamParams { rounds: 3 }).unwrap();
        // princess places in (0,1) = room 0, monster in the adjacent center
        // (1,1) = room 2; then princess stays and the monster walks onto her.
        let s = g.apply(&g.apply(&g.root(), 0), 2);
        assert_eq!(g.kind(&s), NodeKind::Decision(PRINCESS));
        let s = g.apply(&s, 0); // princess stays
        // find the monster move that lands on room 0
        let mv = (0..g.num_actions(&s))
            .find(|&a| {
                let t = g.apply(&s, a);
                g.kind(&t) == NodeKind::Terminal
            })
            .expect("rooms 0 and 2 are adjacent");
        let t = g.apply(&s, mv);
        assert_eq!(g.payoffs(&t), vec![2.0, -2.0]);
    }

    #[test]
    fn perfect_recall_and_invariants() {
        let g = pam(PamParams { rounds: 2 }).unwrap();
        validate(&g, 1_000_000).unwrap();
    }

    #[test]
    fn moves_respect_blocked_rooms() {
        let g = pam(PamParams { rounds: 2 }).unwrap();
        assert_eq!(g.num_rooms(), 7);
        // room (0,1) can only stay or move down
        let top_mid = g.cells.iter().position(|&c| c == (0, 1)).unwrap();
        assert_eq!(g.moves[top_mid].len(), 2);
        // center room has all five options
        let center = g.cells.iter().position(|&c| c == (1, 1)).unwrap();
        assert_eq!(g.moves[center].len(), 5);
    }
}
