//! Runs battles on a thread pool with every bot behind a panic guard.

use std::panic::{catch_unwind, AssertUnwindSafe};

use gamecircle_core::bots::{Bot, BotFault, BotKind, Command, Observation};
use gamecircle_core::engine::{run_round, BattleConfig, BattleResult, BotId, EngineError};
use rayon::prelude::*;

/// Turns a panicking decision into a fault the engine can count.
pub struct Guarded(pub Box<dyn Bot>);

impl Bot for Guarded {
    fn decide(&mut self, obs: &Observation) -> Result<Command, BotFault> {
        match catch_unwind(AssertUnwindSafe(|| self.0.decide(obs))) {
            Ok(result) => result,
            Err(payload) => {
                let message = payload
                    .downcast_ref::<&str>()
                    .map(|s| s.to_string())
                    .or_else(|| payload.downcast_ref::<String>().cloned())
                    .unwrap_or_else(|| "panic".to_string());
                Err(BotFault(message))
            }
        }
    }
}

/// Plays every round of `roster` using up to `jobs` threads.
///
/// Rounds are seeded by index and merged in index order, so the result does
/// not depend on `jobs`.
pub fn run_battle(config: &BattleConfig, roster: &[BotKind], jobs: usize) -> Result<BattleResult, EngineError> {
    let factory = |slot: BotId, seed: u64| -> Box<dyn Bot> { Box::new(Guarded(roster[slot].build(seed))) };
    let play = |round: u32| run_round(config, roster.len(), round, &factory);
    let rounds = if jobs <= 1 {
        (0..config.rounds).map(play).collect::<Result<Vec<_>, _>>()?
    } else {
        match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
            Ok(pool) => pool.install(|| {
                (0..config.rounds)
                    .into_par_iter()
                    .map(play)
                    .collect::<Result<Vec<_>, _>>()
            })?,
            Err(_) => (0..config.rounds).map(play).collect::<Result<Vec<_>, _>>()?,
        }
    };
    let names = roster.iter().map(|k| k.name().to_string()).collect();
    BattleResult::from_rounds(names, rounds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use gamecircle_core::engine::{EventKind, FaultKind};

    struct Panicky;

    impl Bot for Panicky {
        fn decide(&mut self, _: &Observation) -> Result<Command, BotFault> {
            panic!("boom")
        }
    }

    #[test]
    fn panics_become_faults() {
        let mut g = Guarded(Box::new(Panicky));
        let obs = gamecircle_core::engine::BattleState::new(BattleConfig::default(), 2, 0, 1)
            .unwrap()
            .observe(0);
        let prev = std::panic::take_hook();
        std::panic::set_hook(Box::new(|_| {}));
        let out = g.decide(&obs);
        std::panic::set_hook(prev);
        assert_eq!(out, Err(BotFault("boom".into())));
    }

    #[test]
    fn a_panicking_bot_is_disabled_not_fatal() {
        let cfg = BattleConfig {
            rounds: 1,
            max_ticks: 200,
            ..BattleConfig::default()
        };
        let factory = |slot: BotId, seed: u64| -> Box<dyn Bot> {
            if slot == 0 {
                Box::new(Guarded(Box::new(Panicky)))
            } else {
                BotKind::Fire.build(seed)
            }
        };
        let prev = std::panic::take_hook();
        std::panic::set_hook(Box::new(|_| {}));
        let out = run_round(&cfg, 2, 0, &factory).unwrap();
        std::panic::set_hook(prev);
        let disabled = out.events.iter().any(|e| {
            matches!(
                e.kind,
                EventKind::Fault {
                    bot: 0,
                    reason: FaultKind::Disabled
                }
            )
        });
        assert!(disabled);
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let cfg = BattleConfig {
            rounds: 4,
            seed: 17,
            ..BattleConfig::default()
        };
        let roster = [BotKind::TestRobot, BotKind::Crazy];
        let one = run_battle(&cfg, &roster, 1).unwrap();
        let four = run_battle(&cfg, &roster, 4).unwrap();
        assert_eq!(one, four);
    }
}
