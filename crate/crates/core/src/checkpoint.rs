//! Line-delimited solver checkpoints.
//!
//! Format (text, one record per line, f64s as hex bit patterns so resume is
//! bit-exact):
//!
//! ```text
//! cfvfp-checkpoint v1
//! algo=<name> weight=<name> prune=<0|1> threshold=<bits> seed=<u64> game=<selector>
//! t=<u64> nodes=<u64> rng_word_pos=<u128-hex>
//! acc <player> <key-hex> cur=<idx> den=<bits> base=<bits> v=<bits,...> n=<bits,...>
//! ```

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::game::{Game, InfoSetKey};
use crate::solver::{Algorithm, SolverConfig, SolverState, WeightScheme};

fn f2h(x: f64) -> String {
    format!("{:016x}", x.to_bits())
}

fn h2f(s: &str) -> Result<f64> {
    u64::from_str_radix(s, 16)
        .map(f64::from_bits)
        .map_err(|e| Error::Checkpoint(format!("bad f64 bits {s}: {e}")))
}

fn vec2h(v: &[f64]) -> String {
    v.iter().map(|&x| f2h(x)).collect::<Vec<_>>().join(",")
}

fn h2vec(s: &str) -> Result<Vec<f64>> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(h2f).collect()
}

/// Serialize solver state (plus the game selector it was trained on).
pub fn to_string(state: &SolverState, game_selector: &str) -> String {
    let cfg = state.config();
    let mut out = String::new();
    out.push_str("cfvfp-checkpoint v1\n");
    let _ = writeln!(
        out,
        "algo={} weight={} prune={} threshold={} seed={} game={}",
        cfg.algorithm.name(),
        cfg.weight.name(),
        cfg.prune as u8,
        f2h(cfg.prune_threshold),
        cfg.seed,
        game_selector,
    );
    let _ = writeln!(
        out,
        "t={} nodes={} rng_word_pos={:032x}",
        state.iteration(),
        state.nodes_touched(),
        state.rng_word_pos(),
    );
    for (player, key, acc) in state.accumulators_sorted() {
        let _ = writeln!(
            out,
            "acc {player} {} cur={} den={} base={} v={} n={}",
            key.to_hex(),
            acc.current_action,
            f2h(acc.avg_den),
            f2h(acc.baseline),
            vec2h(&acc.values),
            vec2h(&acc.avg_num),
        );
    }
    out
}

pub fn save(state: &SolverState, game_selector: &str, path: &Path) -> Result<()> {
    std::fs::write(path, to_string(state, game_selector))?;
    Ok(())
}

/// Metadata read back from a checkpoint.
#[derive(Debug, Clone)]
pub struct CheckpointHeader {
    pub algorithm: Algorithm,
    pub weight: WeightScheme,
    pub prune: bool,
    pub prune_threshold: f64,
    pub seed: u64,
    pub game_selector: String,
    pub t: u64,
    pub nodes_touched: u64,
    pub rng_word_pos: u128,
}

fn field<'a>(line: &'a str, name: &str) -> Result<&'a str> {
    line.split_whitespace()
        .find_map(|tok| tok.strip_prefix(&format!("{name}=")[..]))
        .ok_or_else(|| Error::Checkpoint(format!("missing field {name}")))
}

pub fn read_header(text: &str) -> Result<CheckpointHeader> {
    let mut lines = text.lines();
    match lines.next() {
        Some("cfvfp-checkpoint v1") => {}
        other => return Err(Error::Checkpoint(format!("bad header line: {other:?}"))),
    }
    let l1 = lines.next().ok_or_else(|| Error::Checkpoint("truncated header".into()))?;
    let l2 = lines.next().ok_or_else(|| Error::Checkpoint("truncated header".into()))?;
    Ok(CheckpointHeader {
        algorithm: Algorithm::parse(field(l1, "algo")?)?,
        weight: WeightScheme::parse(field(l1, "weight")?)?,
        prune: field(l1, "prune")? == "1",
        prune_threshold: h2f(field(l1, "threshold")?)?,
        seed: field(l1, "seed")?
            .parse()
            .map_err(|e| Error::Checkpoint(format!("bad seed: {e}")))?,
        game_selector: field(l1, "game")?.to_string(),
        t: field(l2, "t")?.parse().map_err(|e| Error::Checkpoint(format!("bad t: {e}")))?,
        nodes_touched: field(l2, "nodes")?
            .parse()
            .map_err(|e| Error::Checkpoint(format!("bad nodes: {e}")))?,
        rng_word_pos: u128::from_str_radix(field(l2, "rng_word_pos")?, 16)
            .map_err(|e| Error::Checkpoint(format!("bad rng pos: {e}")))?,
    })
}

/// Rebuild a solver from a checkpoint, bit-exactly.
pub fn restore<G: Game>(game: &G, text: &str) -> Result<SolverState> {
    let header = read_header(text)?;
    let config = SolverConfig {
        algorithm: header.algorithm,
        weight: header.weight,
        prune: header.prune,
        prune_threshold: header.prune_threshold,
        seed: header.seed,
        tree_cap: crate::game::DEFAULT_TREE_CAP,
    };
    let mut state = SolverState::new(game, config)?;
    for line in text.lines().skip(3) {
        if line.is_empty() {
            continue;
        }
        let mut it = line.split_whitespace();
        match it.next() {
            Some("acc") => {}
            other => return Err(Error::Checkpoint(format!("bad record: {other:?}"))),
        }
        let player: usize = it
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Checkpoint("bad player".into()))?;
        let key = InfoSetKey::from_hex(
            it.next().ok_or_else(|| Error::Checkpoint("missing key".into()))?,
        )?;
        let rest: Vec<&str> = it.collect();
        let rest_line = rest.join(" ");
        let cur: usize = field(&rest_line, "cur")?
            .parse()
            .map_err(|e| Error::Checkpoint(format!("bad cur: {e}")))?;
        let den = h2f(field(&rest_line, "den")?)?;
        let base = h2f(field(&rest_line, "base")?)?;
        let values = h2vec(field(&rest_line, "v")?)?;
        let avg_num = h2vec(field(&rest_line, "n")?)?;
        if avg_num.len() != values.len() || cur >= values.len() {
            return Err(Error::Checkpoint(format!("inconsistent record for key {key}")));
        }
        let acc = SolverState::make_restored_accumulator(values, avg_num, den, cur, base);
        state.insert_accumulator(player, key, acc);
    }
    state.restore_counters(header.t, header.nodes_touched);
    state.restore_rng(header.rng_word_pos);
    Ok(state)
}

pub fn load<G: Game>(game: &G, path: &Path) -> Result<SolverState> {
    let text = std::fs::read_to_string(path)?;
    restore(game, &text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::kuhn::{kuhn_ext, KuhnExtParams};

    #[test]
    fn checkpoint_resume_is_bit_exact() {
        let g = kuhn_ext(KuhnExtParams { cards: 3, bet_sizes: 1, raise_cap: 1 }).unwrap();
        for algo in [Algorithm::Cfvfp, Algorithm::MccfrEs, Algorithm::Mccfvfp] {
            let mut a = SolverState::new(&g, SolverConfig::new(algo).with_seed(17)).unwrap();
            a.run(&g, 57).unwrap();
            let text = to_string(&a, "kuhn:x=3,y=1,z=1");
            let mut b = restore(&g, &text).unwrap();
            assert_eq!(b.iteration(), 57);
            // both continue for 43 more iterations and stay identical
            a.run(&g, 43).unwrap();
            b.run(&g, 43).unwrap();
            assert_eq!(a.nodes_touched(), b.nodes_touched(), "{algo:?}");
            let av = a.accumulators_sorted();
            let bv = b.accumulators_sorted();
            assert_eq!(av.len(), bv.len());
            for ((_, ka, aa), (_, kb, ab)) in av.iter().zip(bv.iter()) {
                assert_eq!(ka, kb);
                assert_eq!(aa.values, ab.values, "{algo:?} {ka}");
                assert_eq!(aa.avg_num, ab.avg_num);
                assert_eq!(aa.avg_den, ab.avg_den);
                assert_eq!(aa.current_action, ab.current_action);
            }
        }
    }

    #[test]
    fn header_round_trip() {
        let g = kuhn_ext(KuhnExtParams { cards: 3, bet_sizes: 1, raise_cap: 1 }).unwrap();
        let s = SolverState::new(&g, SolverConfig::new(Algorithm::CfrPlus).with_seed(3)).unwrap();
        let h = read_header(&to_string(&s, "kuhn:x=3,y=1,z=1")).unwrap();
        assert_eq!(h.algorithm, Algorithm::CfrPlus);
        assert_eq!(h.seed, 3);
        assert_eq!(h.game_selector, "kuhn:x=3,y=1,z=1");
    }

    #[test]
    fn rejects_garbage() {
        let g = kuhn_ext(KuhnExtParams { cards: 3, bet_sizes: 1, raise_cap: 1 }).unwrap();
        assert!(restore(&g, "not a checkpoint").is_err());
    }
}
