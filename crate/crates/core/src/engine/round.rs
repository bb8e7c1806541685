use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{BattleConfig, BattleEvent, BattleState, BotId, EngineError, EventKind, FaultKind};
use crate::bots::{Bot, BotKind, Command};
use crate::tournament::ScoreBoard;

/// Consecutive faults after which a bot sits out the rest of the round.
pub const MAX_FAULTS: u32 = 3;

/// Replays allowed for a duel round that ends in an exact tie.
pub const MAX_REPLAYS: u32 = 8;

/// Builds the bot for a roster slot from its per-round seed.
pub type BotFactory<'a> = dyn Fn(BotId, u64) -> Box<dyn Bot> + Sync + 'a;

/// Mixes `seed` with two stream selectors into an independent 64-bit seed.
pub fn derive_seed(seed: u64, stream: u64, index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ index);
    rng.next_u64()
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoundOutcome {
    pub round: u32,
    pub seed: u64,
    /// Number of times the round was played; above 1 only after duel ties.
    pub attempts: u32,
    pub ticks: u32,
    pub placements: Vec<BotId>,
    pub events: Vec<BattleEvent>,
}

impl RoundOutcome {
    pub fn winner(&self) -> BotId {
        self.placements[0]
    }
}

fn tied_duel(state: &BattleState) -> bool {
    let t = state.tanks();
    let d = state.damage_dealt();
    if t.len() != 2 || d[0] != d[1] {
        return false;
    }
    match (t[0].alive, t[1].alive) {
        (false, false) => state.death_ticks()[0] == state.death_ticks()[1],
        (true, true) => t[0].energy == t[1].energy,
        _ => false,
    }
}

/// Plays round `round` to the last survivor or the tick cap.
///
/// Rounds are independent: the placement seed and every bot seed derive from
/// `(config.seed, round)`, so rounds can run in any order or in parallel.
pub fn run_round(
    config: &BattleConfig,
    bots: usize,
    round: u32,
    factory: &BotFactory<'_>,
) -> Result<RoundOutcome, EngineError> {
    for attempt in 0..=MAX_REPLAYS {
        let seed = derive_seed(config.seed, u64::from(round), u64::from(attempt));
        let mut state = BattleState::new(*config, bots, round, seed)?;
        let mut players: Vec<Box<dyn Bot>> = (0..bots)
            .map(|i| factory(i, derive_seed(seed, 1, i as u64)))
            .collect();
        let mut events = state.start_events();
        let mut faults = vec![0u32; bots];
        let mut disabled = vec![false; bots];

        while !state.is_over() {
            let next_tick = state.tick_count() + 1;
            let mut failed = vec![false; bots];
            let mut commands: Vec<Option<Command>> = Vec::with_capacity(bots);
            for (i, bot) in players.iter_mut().enumerate() {
                if !state.tanks()[i].alive || disabled[i] {
                    commands.push(None);
                    continue;
                }
                match bot.decide(&state.observe(i)) {
                    Ok(c) => commands.push(Some(c)),
                    Err(_) => {
                        failed[i] = true;
                        events.push(BattleEvent {
                            round,
                            tick: next_tick,
                            kind: EventKind::Fault {
                                bot: i,
                                reason: FaultKind::Decision,
                            },
                        });
                        commands.push(None);
                    }
                }
            }
            let tick_events = state.tick(&commands);
            for e in &tick_events {
                if let EventKind::Fault {
                    bot,
                    reason: FaultKind::NonFinite,
                } = e.kind
                {
                    failed[bot] = true;
                }
            }
            events.extend(tick_events);
            for i in 0..bots {
                if disabled[i] {
                    continue;
                }
                faults[i] = if failed[i] { faults[i] + 1 } else { 0 };
                if faults[i] >= MAX_FAULTS && state.tanks()[i].alive {
                    disabled[i] = true;
                    events.push(BattleEvent {
                        round,
                        tick: next_tick,
                        kind: EventKind::Fault {
                            bot: i,
                            reason: FaultKind::Disabled,
                        },
                    });
                }
            }
        }

        if tied_duel(&state) {
            continue;
        }
        events.push(state.end_event());
        return Ok(RoundOutcome {
            round,
            seed,
            attempts: attempt + 1,
            ticks: state.tick_count(),
            placements: state.placements(),
            events,
        });
    }
    Err(EngineError::Unresolved { round })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BattleResult {
    pub names: Vec<String>,
    pub rounds: Vec<RoundOutcome>,
    pub board: ScoreBoard,
}

impl BattleResult {
    /// Assembles a result from rounds given in any order.
    pub fn from_rounds(names: Vec<String>, mut rounds: Vec<RoundOutcome>) -> Result<Self, EngineError> {
        rounds.sort_by_key(|r| r.round);
        let mut board = ScoreBoard::new(names.clone());
        for r in &rounds {
            for e in &r.events {
                board.score_event(e).map_err(EngineError::Scoring)?;
            }
        }
        Ok(BattleResult {
            names,
            rounds,
            board,
        })
    }

    pub fn events(&self) -> impl Iterator<Item = &BattleEvent> {
        self.rounds.iter().flat_map(|r| r.events.iter())
    }
}

/// Plays `config.rounds` rounds of `roster` in order on the calling thread.
pub fn run_battle(config: &BattleConfig, roster: &[BotKind]) -> Result<BattleResult, EngineError> {
    let factory = |slot: BotId, seed: u64| roster[slot].build(seed);
    let rounds = (0..config.rounds)
        .map(|r| run_round(config, roster.len(), r, &factory))
        .collect::<Result<Vec<_>, _>>()?;
    let names = roster.iter().map(|k| String::from(k.name())).collect();
    BattleResult::from_rounds(names, rounds)
}
