//! Deterministic tank-combat simulation with game-tree path planning.
//!
//! * [`gametree`]: minimax / alpha-beta search over arc-radius decisions.
//! * [`geometry`]: angles, radar re-sweep, arc fitting and intercepts.
//! * [`engine`]: the tick-based battle simulator and its event log.
//! * [`bots`]: the decision interface, the game-circle bot and baselines.
//! * [`tournament`]: scoring, duel series and melee runs.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod bots;
pub mod engine;
pub mod gametree;
pub mod geometry;
pub mod tournament;
