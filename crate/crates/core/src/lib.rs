//! Solvers and benchmarks for two-player zero-sum imperfect-information
//! games.
//!
//! The crate provides:
//!
//! - a pure-transition-function [`game::Game`] abstraction for extensive-form
//!   games, with exact tree census, reach probabilities, and expected values;
//! - the benchmark games: Kuhn-extension and Leduc-extension poker and the
//!   princess-and-monster pursuit game ([`games`]);
//! - normal-form matrix games with regret-matching and fictitious-play
//!   learners ([`matrix`]);
//! - the solver family ([`solver`]): CFR, CFR+, CFVFP, CFVFP+, external
//!   sampling MCCFR, MCCFVFP, and MCCFVFP+, with naive pruning and
//!   configurable averaging weights, plus bit-exact [`checkpoint`]s;
//! - exact exploitability via best response, node-color censuses, and the
//!   per-infoset operation model ([`metrics`]);
//! - a batch experiment [`harness`] with seeded trials, confidence bands,
//!   and head-to-head matches, driven by the `cfvfp` CLI.

pub mod checkpoint;
pub mod error;
pub mod game;
pub mod games;
pub mod harness;
pub mod matrix;
pub mod metrics;
pub mod rng;
pub mod solver;

pub use error::{Error, Result};
pub use game::{
    enumerate_tree, expected_value, reach_probabilities, Game, InfoSetKey, NodeKind, Policy,
    PlayerId, StrategyProfile, TreeCensus,
};
pub use metrics::{best_response, exploitability, Exploitability};
pub use solver::{Algorithm, SolverConfig, SolverState, WeightScheme};
