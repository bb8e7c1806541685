//! The decision interface between bots and the engine, the game-circle bot
//! and the baseline opponents.

mod baseline;
mod testrobot;
mod threat;

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::engine::{BotId, PhysicsConstants, TankState};
use crate::geometry::{Angle, Pose};

pub use baseline::{Crazy, Fire, MyRobot, SpinBot, VRobot, Walls};
pub use testrobot::{GameCircle, TestRobot, EPOCH_TICKS, GUN_ALIGN_TOLERANCE_DEG};
pub use threat::ThreatModel;

/// One radar contact, as seen by the scanning tank.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanReport {
    pub target: BotId,
    /// Angle from the scanner's body heading to the target, counterclockwise-positive.
    pub bearing: Angle,
    pub distance: f64,
    pub target_heading: Angle,
    pub target_velocity: f64,
}

impl ScanReport {
    /// Absolute position of the target given the scanner's pose.
    pub fn target_position(&self, me: &Pose) -> (f64, f64) {
        let abs = me.heading + self.bearing;
        (
            me.x + self.distance * abs.cos(),
            me.y + self.distance * abs.sin(),
        )
    }
}

/// Everything a bot may see at the start of a tick.
#[derive(Debug, Clone, PartialEq)]
pub struct Observation {
    pub tick: u32,
    pub me: TankState,
    /// Contacts swept by this bot's radar during the previous tick.
    pub scans: Vec<ScanReport>,
    pub arena: (f64, f64),
    /// Opponents still alive.
    pub others: usize,
    pub physics: PhysicsConstants,
}

/// Per-tick request. Turns are relative, in radians; the engine clamps each
/// component to the physical limits.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Command {
    pub target_velocity: f64,
    pub body_turn: Angle,
    pub gun_turn: Angle,
    pub radar_turn: Angle,
    pub fire_power: Option<f64>,
}

impl Command {
    pub fn idle() -> Self {
        Command::default()
    }

    pub fn is_finite(&self) -> bool {
        self.target_velocity.is_finite()
            && self.body_turn.is_finite()
            && self.gun_turn.is_finite()
            && self.radar_turn.is_finite()
            && self.fire_power.is_none_or(f64::is_finite)
    }

    /// Whether every component already sits inside the physical limits for a
    /// tank moving at `velocity`.
    pub fn within_limits(&self, physics: &PhysicsConstants, velocity: f64) -> bool {
        let eps = 1e-9;
        self.target_velocity.abs() <= physics.max_velocity + eps
            && self.body_turn.radians().abs() <= physics.max_body_turn(velocity) + eps
            && self.gun_turn.degrees().abs() <= physics.max_gun_turn + eps
            && self.radar_turn.degrees().abs() <= physics.max_radar_turn + eps
            && self.fire_power.is_none_or(|p| {
                p >= physics.min_power - eps && p <= physics.max_power + eps
            })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BotFault(pub String);

impl fmt::Display for BotFault {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "bot fault: {}", self.0)
    }
}

impl core::error::Error for BotFault {}

/// A tank's decision routine. One instance lives for one round.
pub trait Bot: Send {
    fn decide(&mut self, obs: &Observation) -> Result<Command, BotFault>;
}

/// The shipped roster.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BotKind {
    TestRobot,
    Crazy,
    Fire,
    MyRobot,
    VRobot,
    SpinBot,
    Walls,
}

impl BotKind {
    pub const ALL: [BotKind; 7] = [
        BotKind::TestRobot,
        BotKind::Crazy,
        BotKind::Fire,
        BotKind::MyRobot,
        BotKind::VRobot,
        BotKind::SpinBot,
        BotKind::Walls,
    ];

    /// The six opponents of the duel series.
    pub const BASELINES: [BotKind; 6] = [
        BotKind::Crazy,
        BotKind::Fire,
        BotKind::MyRobot,
        BotKind::VRobot,
        BotKind::SpinBot,
        BotKind::Walls,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BotKind::TestRobot => "TestRobot",
            BotKind::Crazy => "Crazy",
            BotKind::Fire => "Fire",
            BotKind::MyRobot => "My-Robot",
            BotKind::VRobot => "V-Robot",
            BotKind::SpinBot => "SpinBot",
            BotKind::Walls => "Walls",
        }
    }

    /// Case-insensitive lookup; hyphens are optional (`MyRobot` = `My-Robot`).
    pub fn from_name(name: &str) -> Option<BotKind> {
        let key: String = name
            .chars()
            .filter(|c| *c != '-' && *c != '_')
            .flat_map(char::to_lowercase)
            .collect();
        BotKind::ALL.into_iter().find(|k| {
            let candidate: String = k
                .name()
                .chars()
                .filter(|c| *c != '-')
                .flat_map(char::to_lowercase)
                .collect();
            candidate == key
        })
    }

    pub fn valid_names() -> String {
        let names: Vec<&str> = BotKind::ALL.iter().map(|k| k.name()).collect();
        names.join(", ").to_string()
    }

    /// Fresh instance for one round; `seed` drives any randomness the bot uses.
    pub fn build(self, seed: u64) -> Box<dyn Bot> {
        match self {
            BotKind::TestRobot => Box::new(TestRobot::new(seed)),
            BotKind::Crazy => Box::new(Crazy::new(seed)),
            BotKind::Fire => Box::new(Fire::default()),
            BotKind::MyRobot => Box::new(MyRobot::default()),
            BotKind::VRobot => Box::new(VRobot::new(seed)),
            BotKind::SpinBot => Box::new(SpinBot::default()),
            BotKind::Walls => Box::new(Walls::default()),
        }
    }
}

impl fmt::Display for BotKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Clamps `value` into `[-limit, limit]`.
pub(crate) fn clamp_turn(turn: Angle, limit_rad: f64) -> Angle {
    turn.clamp_magnitude(Angle::from_radians(limit_rad))
}

/// Relative turn to face `target` from `current`.
pub(crate) fn turn_towards(current: Angle, target: Angle) -> Angle {
    (target - current).normalized()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_resolve() {
        for k in BotKind::ALL {
            assert_eq!(BotKind::from_name(k.name()), Some(k));
        }
        assert_eq!(BotKind::from_name("myrobot"), Some(BotKind::MyRobot));
        assert_eq!(BotKind::from_name("V_Robot"), Some(BotKind::VRobot));
        assert_eq!(BotKind::from_name("Foo"), None);
    }
}
