//! Score keeping, duel series and melee runs.
//!
//! Scores follow the platform's standard constants: 50 survival points per
//! opponent death while alive, a last-survivor bonus of 10 per opponent, one
//! point per damage point dealt, and a kill bonus of 20% of all damage dealt
//! to the victim.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::bots::BotKind;
use crate::engine::{run_battle, BattleConfig, BattleEvent, BattleResult, BotId, EngineError, EventKind};

pub const SURVIVAL_POINTS: f64 = 50.0;
pub const LAST_SURVIVOR_POINTS: f64 = 10.0;
pub const KILL_BONUS_FRACTION: f64 = 0.2;

#[derive(Debug, Clone, PartialEq)]
pub enum ScoreError {
    UnknownBot(BotId),
    RosterMismatch { expected: usize, got: usize },
    ZeroDivisor,
    AllZero,
    ZeroRounds,
}

impl fmt::Display for ScoreError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScoreError::UnknownBot(b) => write!(f, "event references unknown bot {b}"),
            ScoreError::RosterMismatch { expected, got } => {
                write!(f, "round has {got} bots, board tracks {expected}")
            }
            ScoreError::ZeroDivisor => write!(f, "ratio undefined: divisor is zero"),
            ScoreError::AllZero => write!(f, "every total is zero"),
            ScoreError::ZeroRounds => write!(f, "round count is zero"),
        }
    }
}

impl core::error::Error for ScoreError {}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ScoreEntry {
    pub name: String,
    pub total_score: f64,
    pub survival_score: f64,
    pub last_survivor_bonus: f64,
    pub bullet_damage: f64,
    pub bullet_bonus: f64,
    pub ram_damage: f64,
    pub firsts: u32,
    pub seconds: u32,
    pub thirds: u32,
    pub wins: u32,
}

impl ScoreEntry {
    pub fn new(name: &str) -> Self {
        ScoreEntry {
            name: name.to_string(),
            ..ScoreEntry::default()
        }
    }

    fn retotal(&mut self) {
        self.total_score = self.survival_score
            + self.last_survivor_bonus
            + self.bullet_damage
            + self.bullet_bonus
            + self.ram_damage;
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
struct RoundScratch {
    alive: Vec<bool>,
    /// `damage[shooter][victim]` this round.
    damage: Vec<Vec<f64>>,
    pending: Vec<(BotId, Option<BotId>)>,
    pending_at: Option<(u32, u32)>,
}

/// Running totals per roster slot.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreBoard {
    pub entries: Vec<ScoreEntry>,
    pub rounds: u32,
    scratch: RoundScratch,
}

impl ScoreBoard {
    pub fn new(names: Vec<String>) -> Self {
        let n = names.len();
        ScoreBoard {
            entries: names.iter().map(|n| ScoreEntry::new(n)).collect(),
            rounds: 0,
            scratch: RoundScratch {
                alive: vec![true; n],
                damage: vec![vec![0.0; n]; n],
                ..RoundScratch::default()
            },
        }
    }

    /// A board holding already-computed rows, e.g. reference results.
    pub fn from_entries(entries: Vec<ScoreEntry>, rounds: u32) -> Self {
        let n = entries.len();
        let mut board = ScoreBoard::new(entries.iter().map(|e| e.name.clone()).collect());
        board.entries = entries;
        board.rounds = rounds;
        board.scratch.alive = vec![true; n];
        board
    }

    /// Board computed in one pass over a complete log.
    pub fn from_events<'a>(
        names: Vec<String>,
        events: impl IntoIterator<Item = &'a BattleEvent>,
    ) -> Result<Self, ScoreError> {
        let mut board = ScoreBoard::new(names);
        for e in events {
            board.score_event(e)?;
        }
        Ok(board)
    }

    fn check(&self, bot: BotId) -> Result<(), ScoreError> {
        if bot < self.entries.len() {
            Ok(())
        } else {
            Err(ScoreError::UnknownBot(bot))
        }
    }

    fn flush(&mut self) {
        if self.scratch.pending.is_empty() {
            return;
        }
        let deaths = core::mem::take(&mut self.scratch.pending);
        for &(bot, _) in &deaths {
            self.scratch.alive[bot] = false;
        }
        for (i, entry) in self.entries.iter_mut().enumerate() {
            if self.scratch.alive[i] {
                entry.survival_score += SURVIVAL_POINTS * deaths.len() as f64;
            }
        }
        for &(victim, killer) in &deaths {
            if let Some(k) = killer {
                let dealt = self.scratch.damage[k][victim];
                self.entries[k].bullet_bonus += KILL_BONUS_FRACTION * dealt;
            }
        }
        for e in &mut self.entries {
            e.retotal();
        }
        self.scratch.pending_at = None;
    }

    /// Folds one event into the totals.
    ///
    /// Deaths are settled per tick, so the order of events within one tick
    /// does not change the result.
    pub fn score_event(&mut self, event: &BattleEvent) -> Result<(), ScoreError> {
        if let Some(at) = self.scratch.pending_at {
            if at != (event.round, event.tick) {
                self.flush();
            }
        }
        match &event.kind {
            EventKind::RoundStart { bots, .. } => {
                if *bots != self.entries.len() {
                    return Err(ScoreError::RosterMismatch {
                        expected: self.entries.len(),
                        got: *bots,
                    });
                }
                self.flush();
                let n = self.entries.len();
                self.scratch.alive = vec![true; n];
                self.scratch.damage = vec![vec![0.0; n]; n];
                self.rounds += 1;
            }
            EventKind::BulletHit {
                shooter,
                victim,
                damage,
                ..
            } => {
                self.check(*shooter)?;
                self.check(*victim)?;
                self.scratch.damage[*shooter][*victim] += damage;
                let e = &mut self.entries[*shooter];
                e.bullet_damage += damage;
                e.retotal();
            }
            EventKind::RobotDeath { bot, killer } => {
                self.check(*bot)?;
                if let Some(k) = killer {
                    self.check(*k)?;
                }
                self.scratch.pending.push((*bot, *killer));
                self.scratch.pending_at = Some((event.round, event.tick));
            }
            EventKind::RoundEnd { placements, .. } => {
                for &p in placements {
                    self.check(p)?;
                }
                self.flush();
                let alive: Vec<usize> = (0..self.entries.len())
                    .filter(|&i| self.scratch.alive[i])
                    .collect();
                if let [survivor] = alive[..] {
                    let opponents = (self.entries.len() - 1) as f64;
                    let e = &mut self.entries[survivor];
                    e.last_survivor_bonus += LAST_SURVIVOR_POINTS * opponents;
                    e.retotal();
                }
                for (place, &bot) in placements.iter().take(3).enumerate() {
                    let e = &mut self.entries[bot];
                    match place {
                        0 => {
                            e.firsts += 1;
                            e.wins += 1;
                        }
                        1 => e.seconds += 1,
                        _ => e.thirds += 1,
                    }
                }
            }
            EventKind::Spawn { bot, .. }
            | EventKind::Fire { bot, .. }
            | EventKind::WallHit { bot, .. }
            | EventKind::Decay { bot, .. }
            | EventKind::Fault { bot, .. } => self.check(*bot)?,
            EventKind::Scan {
                scanner, target, ..
            } => {
                self.check(*scanner)?;
                self.check(*target)?;
            }
            EventKind::BulletMiss { shooter, .. } => self.check(*shooter)?,
        }
        Ok(())
    }

    /// Slots ordered by total score, best first; ties keep roster order.
    pub fn ranking(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.entries.len()).collect();
        order.sort_by(|&a, &b| {
            self.entries[b]
                .total_score
                .total_cmp(&self.entries[a].total_score)
                .then(a.cmp(&b))
        });
        order
    }

    pub fn totals(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.total_score).collect()
    }

    /// Whole-percent share of the summed total score, per slot.
    pub fn score_share(&self) -> Result<Vec<f64>, ScoreError> {
        score_share(&self.totals())
    }

    /// Every bot's total covers its survival, damage and kill-bonus parts.
    pub fn is_consistent(&self) -> bool {
        self.entries.iter().all(|e| {
            let parts = e.survival_score + e.bullet_damage + e.bullet_bonus;
            let non_negative = [
                e.total_score,
                e.survival_score,
                e.last_survivor_bonus,
                e.bullet_damage,
                e.bullet_bonus,
                e.ram_damage,
            ]
            .iter()
            .all(|v| *v >= 0.0);
            non_negative
                && e.total_score + 1e-9 * e.total_score.max(1.0) >= parts
                && e.firsts + e.seconds + e.thirds <= self.rounds
        })
    }
}

/// `a / b` rounded to two decimals.
pub fn relative_total(a_score: f64, b_score: f64) -> Result<f64, ScoreError> {
    if b_score == 0.0 {
        return Err(ScoreError::ZeroDivisor);
    }
    Ok(libm::round(a_score / b_score * 100.0) / 100.0)
}

/// Each total as a whole percentage of their sum.
pub fn score_share(totals: &[f64]) -> Result<Vec<f64>, ScoreError> {
    let sum: f64 = totals.iter().sum();
    if sum <= 0.0 {
        return Err(ScoreError::AllZero);
    }
    Ok(totals
        .iter()
        .map(|t| libm::round(100.0 * t / sum))
        .collect())
}

/// Fraction of rounds finished in the top three.
pub fn top3_rate(entry: &ScoreEntry, rounds: u32) -> Result<f64, ScoreError> {
    if rounds == 0 {
        return Err(ScoreError::ZeroRounds);
    }
    Ok(f64::from(entry.firsts + entry.seconds + entry.thirds) / f64::from(rounds))
}

#[derive(Debug, Clone, PartialEq)]
pub enum TournamentError {
    MeleeRoster(usize),
    Engine(EngineError),
}

impl fmt::Display for TournamentError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TournamentError::MeleeRoster(n) => write!(f, "melee needs at least 3 bots, got {n}"),
            TournamentError::Engine(e) => e.fmt(f),
        }
    }
}

impl core::error::Error for TournamentError {}

impl From<EngineError> for TournamentError {
    fn from(e: EngineError) -> Self {
        TournamentError::Engine(e)
    }
}

/// `config.rounds` one-on-one rounds between `a` (slot 0) and `b` (slot 1).
pub fn run_duel_series(
    a: BotKind,
    b: BotKind,
    config: &BattleConfig,
) -> Result<BattleResult, TournamentError> {
    Ok(run_battle(config, &[a, b])?)
}

/// Free-for-all rounds with every bot of `roster` in the arena.
pub fn run_melee(roster: &[BotKind], config: &BattleConfig) -> Result<BattleResult, TournamentError> {
    if roster.len() < 3 {
        return Err(TournamentError::MeleeRoster(roster.len()));
    }
    Ok(run_battle(config, roster)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn ev(round: u32, tick: u32, kind: EventKind) -> BattleEvent {
        BattleEvent { round, tick, kind }
    }

    fn names(n: usize) -> Vec<String> {
        (0..n).map(|i| alloc::format!("b{i}")).collect()
    }

    fn hit(tick: u32, shooter: BotId, victim: BotId, damage: f64) -> BattleEvent {
        ev(
            0,
            tick,
            EventKind::BulletHit {
                bullet: 0,
                shooter,
                victim,
                damage,
                gain: 0.0,
                x: 0.0,
                y: 0.0,
            },
        )
    }

    #[test]
    fn survival_and_damage() {
        let mut b = ScoreBoard::new(names(3));
        b.score_event(&ev(0, 0, EventKind::RoundStart { bots: 3, seed: 1 }))
            .unwrap();
        b.score_event(&hit(5, 0, 2, 16.0)).unwrap();
        assert_eq!(b.entries[0].bullet_damage, 16.0);
        b.score_event(&ev(0, 9, EventKind::RobotDeath { bot: 2, killer: None }))
            .unwrap();
        b.score_event(&ev(
            0,
            9,
            EventKind::RoundEnd {
                placements: vec![0, 1, 2],
                energies: vec![1.0, 1.0, 0.0],
            },
        ))
        .unwrap();
        assert_eq!(b.entries[0].survival_score, 50.0);
        assert_eq!(b.entries[1].survival_score, 50.0);
        assert_eq!(b.entries[2].survival_score, 0.0);
        // two survivors: no last-survivor bonus
        assert_eq!(b.entries[0].last_survivor_bonus, 0.0);
        assert_eq!(b.entries[0].firsts, 1);
        assert_eq!(b.entries[1].seconds, 1);
        assert_eq!(b.entries[2].thirds, 1);
    }

    #[test]
    fn kill_bonus_is_a_fifth_of_damage_to_victim() {
        let mut b = ScoreBoard::new(names(2));
        b.score_event(&ev(0, 0, EventKind::RoundStart { bots: 2, seed: 1 }))
            .unwrap();
        for t in 1..=5 {
            b.score_event(&hit(t, 1, 0, 16.0)).unwrap();
        }
        b.score_event(&ev(0, 5, EventKind::RobotDeath { bot: 0, killer: Some(1) }))
            .unwrap();
        b.score_event(&ev(
            0,
            5,
            EventKind::RoundEnd {
                placements: vec![1, 0],
                energies: vec![0.0, 50.0],
            },
        ))
        .unwrap();
        let e = &b.entries[1];
        assert_eq!(e.bullet_damage, 80.0);
        assert!((e.bullet_bonus - 16.0).abs() < 1e-12);
        assert_eq!(e.survival_score, 50.0);
        assert_eq!(e.last_survivor_bonus, 10.0);
        assert!((e.total_score - 156.0).abs() < 1e-9);
        assert_eq!(e.wins, 1);
        assert!(b.is_consistent());
    }

    #[test]
    fn same_tick_deaths_earn_nothing_for_each_other() {
        let mut b = ScoreBoard::new(names(2));
        b.score_event(&ev(0, 0, EventKind::RoundStart { bots: 2, seed: 1 }))
            .unwrap();
        b.score_event(&ev(0, 7, EventKind::RobotDeath { bot: 0, killer: None }))
            .unwrap();
        b.score_event(&ev(0, 7, EventKind::RobotDeath { bot: 1, killer: None }))
            .unwrap();
        b.score_event(&ev(
            0,
            7,
            EventKind::RoundEnd {
                placements: vec![1, 0],
                energies: vec![0.0, 0.0],
            },
        ))
        .unwrap();
        assert_eq!(b.entries[0].survival_score, 0.0);
        assert_eq!(b.entries[1].survival_score, 0.0);
        assert_eq!(b.entries[1].wins, 1);
    }

    #[test]
    fn unknown_bot_is_rejected() {
        let mut b = ScoreBoard::new(names(2));
        assert_eq!(
            b.score_event(&hit(1, 0, 5, 1.0)),
            Err(ScoreError::UnknownBot(5))
        );
        assert!(matches!(
            b.score_event(&ev(0, 0, EventKind::RoundStart { bots: 3, seed: 0 })),
            Err(ScoreError::RosterMismatch { .. })
        ));
    }

    #[test]
    fn ratio_examples() {
        assert_eq!(relative_total(4573.0, 231.0).unwrap(), 19.80);
        assert_eq!(relative_total(3314.0, 1943.0).unwrap(), 1.71);
        assert_eq!(relative_total(77.0, 77.0).unwrap(), 1.0);
        assert_eq!(relative_total(1.0, 0.0), Err(ScoreError::ZeroDivisor));
    }

    #[test]
    fn share_examples() {
        let totals = [15667.0, 10933.0, 8963.0, 6351.0, 4855.0, 4460.0, 4099.0];
        let s = score_share(&totals).unwrap();
        assert_eq!(s[0], 28.0);
        assert_eq!(s[1], 20.0);
        assert_eq!(score_share(&[12.0]).unwrap(), vec![100.0]);
        assert_eq!(score_share(&[0.0, 0.0]), Err(ScoreError::AllZero));
        let sum: f64 = s.iter().sum();
        assert!((sum - 100.0).abs() <= 1.0);
    }

    #[test]
    fn top3_examples() {
        let mut e = ScoreEntry::new("TestRobot");
        e.firsts = 14;
        e.seconds = 5;
        e.thirds = 2;
        assert!((top3_rate(&e, 30).unwrap() - 0.70).abs() < 1e-12);
        assert_eq!(top3_rate(&ScoreEntry::new("x"), 30).unwrap(), 0.0);
        let mut all = ScoreEntry::new("y");
        all.firsts = 30;
        assert_eq!(top3_rate(&all, 30).unwrap(), 1.0);
        assert_eq!(top3_rate(&all, 0), Err(ScoreError::ZeroRounds));
    }

    #[test]
    fn static_board_ranks_like_the_melee_table() {
        let rows = [
            ("Fire", 4460.0),
            ("TestRobot", 15667.0),
            ("Crazy", 4855.0),
            ("SpinBot", 10933.0),
            ("My-Robot", 4099.0),
            ("Walls", 8963.0),
            ("V-Robot", 6351.0),
        ];
        let entries = rows
            .iter()
            .map(|(n, t)| ScoreEntry {
                total_score: *t,
                ..ScoreEntry::new(n)
            })
            .collect();
        let board = ScoreBoard::from_entries(entries, 30);
        let order: Vec<&str> = board
            .ranking()
            .into_iter()
            .map(|i| board.entries[i].name.as_str())
            .collect();
        assert_eq!(
            order,
            ["TestRobot", "SpinBot", "Walls", "V-Robot", "Crazy", "Fire", "My-Robot"]
        );
    }

    #[test]
    fn melee_needs_three() {
        let cfg = BattleConfig::default();
        assert_eq!(
            run_melee(&[BotKind::TestRobot, BotKind::Fire], &cfg),
            Err(TournamentError::MeleeRoster(2))
        );
    }
}
