//! Benchmark game constructors and the CLI selector syntax.
//!
//! Selectors: `kuhn:x=3,y=1,z=1`, `leduc:x=3,y=1,z=1`, `pam:rounds=4`,
//! `rps-lr`, `randmat:n=100,m=100,boost=5,rows=10,seed=S`.

pub mod kuhn;
pub mod leduc;
pub mod pam;

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::game::{Game, InfoSetKey, NodeKind};
use crate::matrix::{
    gen_boosted_matrix, rps_leaky_rock, MatrixGame, MatrixTree, MatrixTreeState,
};
use crate::rng::derive_seed;

use kuhn::{kuhn_ext, KuhnExt, KuhnExtParams, KuhnState};
use leduc::{leduc_ext, LeducExt, LeducExtParams, LeducState};
use pam::{pam, Pam, PamParams, PamState};

/// Parsed game selector.
#[derive(Debug, Clone, PartialEq)]
pub enum GameChoice {
    Kuhn(KuhnExtParams),
    Leduc(LeducExtParams),
    Pam(PamParams),
    RpsLr,
    RandMat { n: usize, m: usize, boost: f64, rows: usize, seed: u64 },
}

fn parse_kv(spec: &str) -> Result<HashMap<String, String>> {
    let mut out = HashMap::new();
    for part in spec.split(',') {
        if part.is_empty() {
            continue;
        }
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("expected key=value, got '{part}'")))?;
        out.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(out)
}

fn get_num<T: std::str::FromStr>(kv: &HashMap<String, String>, key: &str, default: Option<T>) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    match kv.get(key) {
        Some(v) => v.parse().map_err(|e| Error::Config(format!("bad {key}={v}: {e}"))),
        None => default.ok_or_else(|| Error::Config(format!("missing parameter {key}"))),
    }
}

/// Parse a game selector string.
pub fn parse_selector(s: &str) -> Result<GameChoice> {
    let (name, rest) = match s.split_once(':') {
        Some((n, r)) => (n, r),
        None => (s, ""),
    };
    match name {
        "kuhn" => {
            let kv = parse_kv(rest)?;
            Ok(GameChoice::Kuhn(KuhnExtParams {
                cards: get_num(&kv, "x", None)?,
                bet_sizes: get_num(&kv, "y", Some(1))?,
                raise_cap: get_num(&kv, "z", Some(1))?,
            }))
        }
        "leduc" => {
            let kv = parse_kv(rest)?;
            Ok(GameChoice::Leduc(LeducExtParams {
                cards: get_num(&kv, "x", None)?,
                bet_sizes: get_num(&kv, "y", Some(1))?,
                raise_cap: get_num(&kv, "z", Some(1))?,
            }))
        }
        "pam" => {
            let kv = parse_kv(rest)?;
            Ok(GameChoice::Pam(PamParams { rounds: get_num(&kv, "rounds", None)? }))
        }
        "rps-lr" => Ok(GameChoice::RpsLr),
        "randmat" => {
            let kv = parse_kv(rest)?;
            Ok(GameChoice::RandMat {
                n: get_num(&kv, "n", None)?,
                m: get_num(&kv, "m", None)?,
                boost: get_num(&kv, "boost", Some(0.0))?,
                rows: get_num(&kv, "rows", Some(0))?,
                seed: get_num(&kv, "seed", Some(0))?,
            })
        }
        other => Err(Error::Config(format!("unknown game: {other}"))),
    }
}

impl GameChoice {
    pub fn is_matrix(&self) -> bool {
        matches!(self, GameChoice::RpsLr | GameChoice::RandMat { .. })
    }

    /// The normal-form game behind a matrix selector. Random matrices are
    /// redrawn per trial from the selector seed.
    pub fn build_matrix(&self, trial: u32) -> Result<MatrixGame> {
        match self {
            GameChoice::RpsLr => Ok(rps_leaky_rock()),
            GameChoice::RandMat { n, m, boost, rows, seed } => {
                gen_boosted_matrix(*n, *m, *rows, *boost, derive_seed(*seed, trial as u64))
            }
            _ => Err(Error::Config("not a matrix game selector".into())),
        }
    }

    /// Extensive-form game for this selector; matrix selectors are lifted to
    /// two-level trees.
    pub fn build_tree(&self, trial: u32) -> Result<AnyGame> {
        Ok(match self {
            GameChoice::Kuhn(p) => AnyGame::Kuhn(kuhn_ext(*p)?),
            GameChoice::Leduc(p) => AnyGame::Leduc(leduc_ext(*p)?),
            GameChoice::Pam(p) => AnyGame::Pam(pam(*p)?),
            GameChoice::RpsLr | GameChoice::RandMat { .. } => {
                AnyGame::Matrix(self.build_matrix(trial)?.to_extensive())
            }
        })
    }
}

impl std::fmt::Display for GameChoice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GameChoice::Kuhn(p) => {
                write!(f, "kuhn:x={},y={},z={}", p.cards, p.bet_sizes, p.raise_cap)
            }
            GameChoice::Leduc(p) => {
                write!(f, "leduc:x={},y={},z={}", p.cards, p.bet_sizes, p.raise_cap)
            }
            GameChoice::Pam(p) => write!(f, "pam:rounds={}", p.rounds),
            GameChoice::RpsLr => write!(f, "rps-lr"),
            GameChoice::RandMat { n, m, boost, rows, seed } => {
                write!(f, "randmat:n={n},m={m},boost={boost},rows={rows},seed={seed}")
            }
        }
    }
}

/// Concrete game dispatch so the harness and CLI stay monomorphic.
pub enum AnyGame {
    Kuhn(KuhnExt),
    Leduc(LeducExt),
    Pam(Pam),
    Matrix(MatrixTree),
}

#[derive(Clone)]
pub enum AnyState {
    Kuhn(KuhnState),
    Leduc(LeducState),
    Pam(PamState),
    Matrix(MatrixTreeState),
}

macro_rules! dispatch {
    ($game:expr, $state:expr, |$g:ident, $s:ident| $body:expr) => {
        match ($game, $state) {
            (AnyGame::Kuhn($g), AnyState::Kuhn($s)) => $body,
            (AnyGame::Leduc($g), AnyState::Leduc($s)) => $body,
            (AnyGame::Pam($g), AnyState::Pam($s)) => $body,
            (AnyGame::Matrix($g), AnyState::Matrix($s)) => $body,
            _ => panic!("state does not belong to this game"),
        }
    };
}

impl Game for AnyGame {
    type State = AnyState;

    fn num_players(&self) -> usize {
        2
    }

    fn root(&self) -> AnyState {
        match self {
            AnyGame::Kuhn(g) => AnyState::Kuhn(g.root()),
            AnyGame::Leduc(g) => AnyState::Leduc(g.root()),
            AnyGame::Pam(g) => AnyState::Pam(g.root()),
            AnyGame::Matrix(g) => AnyState::Matrix(g.root()),
        }
    }

    fn kind(&self, state: &AnyState) -> NodeKind {
        dispatch!(self, state, |g, s| g.kind(s))
    }

    fn num_actions(&self, state: &AnyState) -> usize {
        dispatch!(self, state, |g, s| g.num_actions(s))
    }

    fn apply(&self, state: &AnyState, action: usize) -> AnyState {
        match (self, state) {
            (AnyGame::Kuhn(g), AnyState::Kuhn(s)) => AnyState::Kuhn(g.apply(s, action)),
            (AnyGame::Leduc(g), AnyState::Leduc(s)) => AnyState::Leduc(g.apply(s, action)),
            (AnyGame::Pam(g), AnyState::Pam(s)) => AnyState::Pam(g.apply(s, action)),
            (AnyGame::Matrix(g), AnyState::Matrix(s)) => AnyState::Matrix(g.apply(s, action)),
            _ => panic!("state does not belong to this game"),
        }
    }

    fn chance_probs(&self, state: &AnyState) -> Vec<f64> {
        dispatch!(self, state, |g, s| g.chance_probs(s))
    }

    fn payoffs(&self, state: &AnyState) -> Vec<f64> {
        dispatch!(self, state, |g, s| g.payoffs(s))
    }

    fn infoset_key(&self, state: &AnyState) -> InfoSetKey {
        dispatch!(self, state, |g, s| g.infoset_key(s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::enumerate_tree;

    #[test]
    fn selector_round_trip() {
        for s in [
            "kuhn:x=3,y=1,z=1",
            "leduc:x=7,y=1,z=1",
            "pam:rounds=4",
            "rps-lr",
            "randmat:n=100,m=100,boost=5,rows=10,seed=7",
        ] {
            let c = parse_selector(s).unwrap();
            assert_eq!(parse_selector(&c.to_string()).unwrap(), c);
        }
    }

    #[test]
    fn selector_errors_are_config_errors() {
        assert!(parse_selector("chess").is_err());
        assert!(parse_selector("kuhn:y=1").is_err());
        assert!(parse_selector("kuhn:x=three").is_err());
    }

    #[test]
    fn any_game_dispatch_works() {
        let g = parse_selector("kuhn:x=3,y=1,z=1").unwrap().build_tree(0).unwrap();
        let c = enumerate_tree(&g).unwrap();
        assert_eq!((c.total_infosets(), c.total_nodes), (12, 55));
    }

    #[test]
    fn randmat_redraws_per_trial() {
        let c = parse_selector("randmat:n=4,m=4,seed=5").unwrap();
        let a = c.build_matrix(0).unwrap();
        let b = c.build_matrix(1).unwrap();
        assert_ne!(a.get(0, 0), b.get(0, 0));
        let a2 = c.build_matrix(0).unwrap();
        assert_eq!(a.get(0, 0), a2.get(0, 0));
    }
}
