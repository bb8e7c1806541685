//! Battle events and their line format.
//!
//! One event per line, fields separated by single spaces:
//!
//! ```text
//! <round> <tick> <kind> <payload...>
//! ```
//!
//! | kind          | payload                                              |
//! |---------------|------------------------------------------------------|
//! | `round_start` | `bots seed`                                          |
//! | `spawn`       | `bot x y heading energy`                             |
//! | `scan`        | `scanner target bearing distance heading velocity`   |
//! | `fire`        | `bot bullet power x y heading`                       |
//! | `bullet_hit`  | `bullet shooter victim damage gain x y`              |
//! | `bullet_miss` | `bullet shooter x y`                                 |
//! | `wall_hit`    | `bot damage x y`                                     |
//! | `decay`       | `bot amount`                                         |
//! | `fault`       | `bot reason`                                         |
//! | `robot_death` | `bot killer` (`-` when no bullet caused it)          |
//! | `round_end`   | `placements energies` (comma-separated, best first)  |
//!
//! Angles are radians; numbers use the shortest representation that
//! round-trips, so parsing a log and writing it again is byte-identical.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

pub type BotId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaultKind {
    /// The decision routine reported an error or panicked.
    Decision,
    NonFinite,
    /// A command arrived for a dead tank.
    DeadCommand,
    /// Too many faults this round; the bot idles until the round ends.
    Disabled,
}

impl FaultKind {
    fn as_str(self) -> &'static str {
        match self {
            FaultKind::Decision => "decision",
            FaultKind::NonFinite => "non_finite",
            FaultKind::DeadCommand => "dead_command",
            FaultKind::Disabled => "disabled",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum EventKind {
    RoundStart {
        bots: usize,
        seed: u64,
    },
    Spawn {
        bot: BotId,
        x: f64,
        y: f64,
        heading: f64,
        energy: f64,
    },
    Scan {
        scanner: BotId,
        target: BotId,
        bearing: f64,
        distance: f64,
        heading: f64,
        velocity: f64,
    },
    Fire {
        bot: BotId,
        bullet: u32,
        power: f64,
        x: f64,
        y: f64,
        heading: f64,
    },
    BulletHit {
        bullet: u32,
        shooter: BotId,
        victim: BotId,
        /// Energy actually removed from the victim.
        damage: f64,
        /// Energy returned to the shooter; zero when the shooter is dead.
        gain: f64,
        x: f64,
        y: f64,
    },
    BulletMiss {
        bullet: u32,
        shooter: BotId,
        x: f64,
        y: f64,
    },
    WallHit {
        bot: BotId,
        damage: f64,
        x: f64,
        y: f64,
    },
    Decay {
        bot: BotId,
        amount: f64,
    },
    Fault {
        bot: BotId,
        reason: FaultKind,
    },
    RobotDeath {
        bot: BotId,
        killer: Option<BotId>,
    },
    RoundEnd {
        placements: Vec<BotId>,
        energies: Vec<f64>,
    },
}

impl EventKind {
    pub fn name(&self) -> &'static str {
        match self {
            EventKind::RoundStart { .. } => "round_start",
            EventKind::Spawn { .. } => "spawn",
            EventKind::Scan { .. } => "scan",
            EventKind::Fire { .. } => "fire",
            EventKind::BulletHit { .. } => "bullet_hit",
            EventKind::BulletMiss { .. } => "bullet_miss",
            EventKind::WallHit { .. } => "wall_hit",
            EventKind::Decay { .. } => "decay",
            EventKind::Fault { .. } => "fault",
            EventKind::RobotDeath { .. } => "robot_death",
            EventKind::RoundEnd { .. } => "round_end",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BattleEvent {
    pub round: u32,
    pub tick: u32,
    pub kind: EventKind,
}

impl fmt::Display for BattleEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.round, self.tick, self.kind.name())?;
        match &self.kind {
            EventKind::RoundStart { bots, seed } => write!(f, " {bots} {seed}"),
            EventKind::Spawn {
                bot,
                x,
                y,
                heading,
                energy,
            } => write!(f, " {bot} {x:?} {y:?} {heading:?} {energy:?}"),
            EventKind::Scan {
                scanner,
                target,
                bearing,
                distance,
                heading,
                velocity,
            } => write!(
                f,
                " {scanner} {target} {bearing:?} {distance:?} {heading:?} {velocity:?}"
            ),
            EventKind::Fire {
                bot,
                bullet,
                power,
                x,
                y,
                heading,
            } => write!(f, " {bot} {bullet} {power:?} {x:?} {y:?} {heading:?}"),
            EventKind::BulletHit {
                bullet,
                shooter,
                victim,
                damage,
                gain,
                x,
                y,
            } => write!(
                f,
                " {bullet} {shooter} {victim} {damage:?} {gain:?} {x:?} {y:?}"
            ),
            EventKind::BulletMiss {
                bullet,
                shooter,
                x,
                y,
            } => write!(f, " {bullet} {shooter} {x:?} {y:?}"),
            EventKind::WallHit { bot, damage, x, y } => write!(f, " {bot} {damage:?} {x:?} {y:?}"),
            EventKind::Decay { bot, amount } => write!(f, " {bot} {amount:?}"),
            EventKind::Fault { bot, reason } => write!(f, " {bot} {}", reason.as_str()),
            EventKind::RobotDeath { bot, killer } => match killer {
                Some(k) => write!(f, " {bot} {k}"),
                None => write!(f, " {bot} -"),
            },
            EventKind::RoundEnd {
                placements,
                energies,
            } => {
                f.write_str(" ")?;
                write_list(f, placements.iter().map(|p| p as &dyn fmt::Debug))?;
                f.write_str(" ")?;
                write_list(f, energies.iter().map(|e| e as &dyn fmt::Debug))
            }
        }
    }
}

fn write_list<'a>(
    f: &mut fmt::Formatter<'_>,
    items: impl Iterator<Item = &'a dyn fmt::Debug>,
) -> fmt::Result {
    let mut first = true;
    for item in items {
        if !first {
            f.write_str(",")?;
        }
        first = false;
        write!(f, "{item:?}")?;
    }
    if first {
        f.write_str("-")?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseEventError(pub String);

impl fmt::Display for ParseEventError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "malformed event: {}", self.0)
    }
}

impl core::error::Error for ParseEventError {}

struct Fields<'a> {
    line: &'a str,
    it: core::str::Split<'a, char>,
}

impl<'a> Fields<'a> {
    fn err(&self, what: &str) -> ParseEventError {
        ParseEventError(alloc::format!("{what} in {:?}", self.line))
    }

    fn next_str(&mut self) -> Result<&'a str, ParseEventError> {
        self.it.next().ok_or_else(|| self.err("missing field"))
    }

    fn next<T: FromStr>(&mut self) -> Result<T, ParseEventError> {
        let s = self.next_str()?;
        s.parse().map_err(|_| self.err("bad field"))
    }

    fn list<T: FromStr>(&mut self) -> Result<Vec<T>, ParseEventError> {
        let s = self.next_str()?;
        if s == "-" {
            return Ok(Vec::new());
        }
        s.split(',')
            .map(|p| p.parse().map_err(|_| self.err("bad list item")))
            .collect()
    }

    fn finish(mut self) -> Result<(), ParseEventError> {
        match self.it.next() {
            None => Ok(()),
            Some(_) => Err(self.err("trailing fields")),
        }
    }
}

impl FromStr for BattleEvent {
    type Err = ParseEventError;

    fn from_str(line: &str) -> Result<Self, Self::Err> {
        let mut f = Fields {
            line,
            it: line.split(' '),
        };
        let round = f.next()?;
        let tick = f.next()?;
        let kind = match f.next_str()? {
            "round_start" => EventKind::RoundStart {
                bots: f.next()?,
                seed: f.next()?,
            },
            "spawn" => EventKind::Spawn {
                bot: f.next()?,
                x: f.next()?,
                y: f.next()?,
                heading: f.next()?,
                energy: f.next()?,
            },
            "scan" => EventKind::Scan {
                scanner: f.next()?,
                target: f.next()?,
                bearing: f.next()?,
                distance: f.next()?,
                heading: f.next()?,
                velocity: f.next()?,
            },
            "fire" => EventKind::Fire {
                bot: f.next()?,
                bullet: f.next()?,
                power: f.next()?,
                x: f.next()?,
                y: f.next()?,
                heading: f.next()?,
            },
            "bullet_hit" => EventKind::BulletHit {
                bullet: f.next()?,
                shooter: f.next()?,
                victim: f.next()?,
                damage: f.next()?,
                gain: f.next()?,
                x: f.next()?,
                y: f.next()?,
            },
            "bullet_miss" => EventKind::BulletMiss {
                bullet: f.next()?,
                shooter: f.next()?,
                x: f.next()?,
                y: f.next()?,
            },
            "wall_hit" => EventKind::WallHit {
                bot: f.next()?,
                damage: f.next()?,
                x: f.next()?,
                y: f.next()?,
            },
            "decay" => EventKind::Decay {
                bot: f.next()?,
                amount: f.next()?,
            },
            "fault" => {
                let bot = f.next()?;
                let reason = match f.next_str()? {
                    "decision" => FaultKind::Decision,
                    "non_finite" => FaultKind::NonFinite,
                    "dead_command" => FaultKind::DeadCommand,
                    "disabled" => FaultKind::Disabled,
                    _ => return Err(f.err("unknown fault")),
                };
                EventKind::Fault { bot, reason }
            }
            "robot_death" => {
                let bot = f.next()?;
                let killer = match f.next_str()? {
                    "-" => None,
                    k => Some(k.parse().map_err(|_| f.err("bad killer"))?),
                };
                EventKind::RobotDeath { bot, killer }
            }
            "round_end" => EventKind::RoundEnd {
                placements: f.list()?,
                energies: f.list()?,
            },
            other => return Err(ParseEventError(other.to_string())),
        };
        f.finish()?;
        Ok(BattleEvent { round, tick, kind })
    }
}
