//! Simple opponents modelled on the reference platform's sample bots.
//!
//! `MyRobot` and `VRobot` have no reference source; they are plain
//! seek-and-shoot variants.

use core::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{clamp_turn, turn_towards, Bot, BotFault, Command, Observation, ScanReport};
use crate::geometry::{solve_intercept, Angle, TargetMotion};

fn nearest(obs: &Observation) -> Option<&ScanReport> {
    obs.scans
        .iter()
        .min_by(|a, b| a.distance.total_cmp(&b.distance))
}

fn spin(obs: &Observation) -> Angle {
    Angle::from_degrees(obs.physics.max_radar_turn)
}

/// Gun turn towards the absolute direction `aim`, and whether the gun will
/// be within `tolerance_deg` of it after turning.
fn point_gun(obs: &Observation, aim: Angle, tolerance_deg: f64) -> (Angle, bool) {
    let turn = turn_towards(obs.me.gun_heading, aim);
    let applied = clamp_turn(turn, obs.physics.max_gun_turn.to_radians());
    let aligned = (turn - applied).radians().abs() <= tolerance_deg.to_radians();
    (applied, aligned)
}

fn ready(obs: &Observation, power: f64) -> Option<f64> {
    (obs.me.gun_heat <= 1e-9 && obs.me.energy > power + 0.1).then_some(power)
}

/// Whether travelling `reach` units along `direction` stays off the walls.
fn open_ahead(obs: &Observation, direction: Angle, reach: f64) -> bool {
    let m = obs.physics.half_size() + 8.0;
    let x = obs.me.pose.x + reach * direction.cos();
    let y = obs.me.pose.y + reach * direction.sin();
    x >= m && x <= obs.arena.0 - m && y >= m && y <= obs.arena.1 - m
}

fn travel_direction(obs: &Observation, forward: bool) -> Angle {
    if forward {
        obs.me.pose.heading
    } else {
        obs.me.pose.heading + Angle::from_radians(PI)
    }
}

/// Wobbles along alternating arcs, reverses at walls and at random, and fires
/// light bullets wherever its gun happens to point when the radar sees anyone.
#[derive(Debug, Clone)]
pub struct Crazy {
    rng: ChaCha8Rng,
    forward: bool,
    turn_left: bool,
    leg: u32,
}

impl Crazy {
    pub fn new(seed: u64) -> Self {
        Crazy {
            rng: ChaCha8Rng::seed_from_u64(seed),
            forward: true,
            turn_left: true,
            leg: 0,
        }
    }
}

impl Bot for Crazy {
    fn decide(&mut self, obs: &Observation) -> Result<Command, BotFault> {
        let p = &obs.physics;
        if self.leg == 0 {
            self.leg = self.rng.gen_range(10..40);
            self.turn_left = !self.turn_left;
            if self.rng.gen_bool(0.3) {
                self.forward = !self.forward;
            }
        }
        self.leg -= 1;
        if !open_ahead(obs, travel_direction(obs, self.forward), 40.0) {
            self.forward = !self.forward;
        }
        let limit = p.max_body_turn(obs.me.velocity);
        let body_turn = Angle::from_radians(if self.turn_left { limit } else { -limit });
        // The gun is carried by the body and never aimed.
        let gun_turn = Angle::ZERO;
        let fire_power = if obs.scans.is_empty() { None } else { ready(obs, 1.0) };
        Ok(Command {
            target_velocity: if self.forward { p.max_velocity } else { -p.max_velocity },
            body_turn,
            gun_turn,
            radar_turn: spin(obs),
            fire_power,
        })
    }
}

/// Never moves. Spins its radar and fires straight at whatever it sees.
#[derive(Debug, Clone, Default)]
pub struct Fire {
    last_aim: Option<Angle>,
}

impl Bot for Fire {
    fn decide(&mut self, obs: &Observation) -> Result<Command, BotFault> {
        if let Some(s) = nearest(obs) {
            self.last_aim = Some(obs.me.pose.heading + s.bearing);
        }
        let Some(aim) = self.last_aim else {
            return Ok(Command {
                radar_turn: spin(obs),
                ..Command::idle()
            });
        };
        let (gun_turn, aligned) = point_gun(obs, aim, 3.0);
        let close = nearest(obs).is_some_and(|s| s.distance < 50.0) && obs.me.energy > 50.0;
        let power = if close { 3.0 } else { 1.0 };
        Ok(Command {
            gun_turn,
            radar_turn: spin(obs),
            fire_power: if aligned { ready(obs, power) } else { None },
            ..Command::idle()
        })
    }
}

/// Drives a constant tight circle and fires heavy bullets straight at
/// whatever its radar finds.
#[derive(Debug, Clone, Default)]
pub struct SpinBot {
    last_aim: Option<Angle>,
}

impl SpinBot {
    pub const SPEED: f64 = 5.0;
}

impl Bot for SpinBot {
    fn decide(&mut self, obs: &Observation) -> Result<Command, BotFault> {
        let p = &obs.physics;
        if let Some(s) = nearest(obs) {
            self.last_aim = Some(obs.me.pose.heading + s.bearing);
        }
        let body_turn = Angle::from_radians(p.max_body_turn(Self::SPEED));
        let (gun_turn, fire_power) = match self.last_aim {
            Some(aim) => {
                let (turn, aligned) = point_gun(obs, aim, 5.0);
                (turn, if aligned { ready(obs, 3.0) } else { None })
            }
            None => (Angle::ZERO, None),
        };
        Ok(Command {
            target_velocity: Self::SPEED,
            body_turn,
            gun_turn,
            radar_turn: spin(obs),
            fire_power,
        })
    }
}

/// Runs along the walls counterclockwise with its gun pointing into the
/// arena, firing at anything that crosses the gun line.
#[derive(Debug, Clone, Default)]
pub struct Walls {
    /// Body rotation still owed from the last corner.
    pending: f64,
    patrolling: bool,
}

impl Walls {
    fn ahead(obs: &Observation) -> f64 {
        let half = obs.physics.half_size();
        let h = obs.me.pose.heading;
        let (x, y) = (obs.me.pose.x, obs.me.pose.y);
        let (c, s) = (h.cos(), h.sin());
        let mut d = f64::INFINITY;
        if c > 1e-9 {
            d = d.min((obs.arena.0 - half - x) / c);
        } else if c < -1e-9 {
            d = d.min((half - x) / c);
        }
        if s > 1e-9 {
            d = d.min((obs.arena.1 - half - y) / s);
        } else if s < -1e-9 {
            d = d.min((half - y) / s);
        }
        d.max(0.0)
    }
}

impl Bot for Walls {
    fn decide(&mut self, obs: &Observation) -> Result<Command, BotFault> {
        let p = &obs.physics;
        let heading = obs.me.pose.heading;
        if !self.patrolling && self.pending == 0.0 {
            // Face the nearest compass direction first.
            let quarter = PI / 2.0;
            let snapped = libm::round(heading.radians() / quarter) * quarter;
            self.pending = snapped - heading.radians();
            self.patrolling = true;
        }
        let ahead = Self::ahead(obs);
        if self.pending == 0.0 && ahead < 1.0 && obs.me.velocity.abs() < 1e-9 {
            self.pending = PI / 2.0;
        }
        let limit = p.max_body_turn(obs.me.velocity);
        let mut body_turn = Angle::ZERO;
        let mut target_velocity = 0.0;
        if self.pending.abs() > 1e-12 {
            let step = self.pending.clamp(-limit, limit);
            self.pending -= step;
            if self.pending.abs() < 1e-12 {
                self.pending = 0.0;
            }
            body_turn = Angle::from_radians(step);
        } else {
            target_velocity = p.max_velocity.min(libm::sqrt(2.0 * p.deceleration * ahead));
        }
        let inward = heading + body_turn + Angle::from_degrees(90.0);
        let gun_turn = clamp_turn(turn_towards(obs.me.gun_heading, inward), p.max_gun_turn.to_radians());
        let radar_turn = clamp_turn(
            turn_towards(obs.me.radar_heading, obs.me.gun_heading + gun_turn),
            p.max_radar_turn.to_radians(),
        );
        let fire_power = if obs.scans.is_empty() { None } else { ready(obs, 2.0) };
        Ok(Command {
            target_velocity,
            body_turn,
            gun_turn,
            radar_turn,
            fire_power,
        })
    }
}

/// Locks on, drives straight at its target and fires head-on.
#[derive(Debug, Clone, Default)]
pub struct MyRobot {
    last: Option<(u32, Angle, f64)>,
}

impl Bot for MyRobot {
    fn decide(&mut self, obs: &Observation) -> Result<Command, BotFault> {
        let p = &obs.physics;
        if let Some(s) = nearest(obs) {
            self.last = Some((obs.tick, obs.me.pose.heading + s.bearing, s.distance));
        }
        let Some((seen, aim, distance)) = self.last.filter(|l| obs.tick - l.0 <= 8) else {
            return Ok(Command {
                radar_turn: spin(obs),
                ..Command::idle()
            });
        };
        let radar_turn = clamp_turn(
            turn_towards(obs.me.radar_heading, aim) * 2.0,
            p.max_radar_turn.to_radians(),
        );
        let body_turn = clamp_turn(turn_towards(obs.me.pose.heading, aim), p.max_body_turn(obs.me.velocity));
        let target_velocity = if distance > 150.0 { 6.0 } else { 0.0 };
        let (gun_turn, aligned) = point_gun(obs, aim, 3.0);
        let fire_power = (aligned && seen == obs.tick).then(|| ready(obs, 2.0)).flatten();
        Ok(Command {
            target_velocity,
            body_turn,
            gun_turn,
            radar_turn,
            fire_power,
        })
    }
}

/// Strafes sideways to its target, reversing at random, and leads the target
/// assuming it keeps going straight.
#[derive(Debug, Clone)]
pub struct VRobot {
    rng: ChaCha8Rng,
    forward: bool,
    leg: u32,
    last: Option<(u32, ScanReport)>,
}

impl VRobot {
    pub fn new(seed: u64) -> Self {
        VRobot {
            rng: ChaCha8Rng::seed_from_u64(seed),
            forward: true,
            leg: 0,
            last: None,
        }
    }
}

impl Bot for VRobot {
    fn decide(&mut self, obs: &Observation) -> Result<Command, BotFault> {
        let p = &obs.physics;
        if let Some(s) = nearest(obs) {
            self.last = Some((obs.tick, *s));
        }
        if self.leg == 0 {
            self.leg = self.rng.gen_range(15..45);
            self.forward = !self.forward;
        }
        self.leg -= 1;
        if !open_ahead(obs, travel_direction(obs, self.forward), 60.0) {
            self.forward = !self.forward;
        }
        let velocity = if self.forward { 6.0 } else { -6.0 };
        let Some((seen, s)) = self.last.filter(|l| obs.tick - l.0 <= 8) else {
            return Ok(Command {
                target_velocity: velocity,
                radar_turn: spin(obs),
                ..Command::idle()
            });
        };
        let me = obs.me.pose;
        let aim_abs = me.heading + s.bearing;
        let radar_turn = clamp_turn(
            turn_towards(obs.me.radar_heading, aim_abs) * 2.0,
            p.max_radar_turn.to_radians(),
        );
        let side = aim_abs + Angle::from_degrees(90.0);
        let body_turn = clamp_turn(
            Angle::from_radians(libm::asin(libm::sin(turn_towards(me.heading, side).radians()))),
            p.max_body_turn(obs.me.velocity),
        );
        let (tx, ty) = s.target_position(&me);
        let target = crate::geometry::Pose::new(tx, ty, s.target_heading);
        let power = 1.5;
        let aim = solve_intercept(
            (me.x, me.y),
            target,
            s.target_velocity,
            TargetMotion::Straight,
            p.bullet_speed(power),
        )
        .map_or(aim_abs, |i| i.fire_angle);
        let (gun_turn, aligned) = point_gun(obs, aim, 3.0);
        let fire_power = (aligned && seen == obs.tick).then(|| ready(obs, power)).flatten();
        Ok(Command {
            target_velocity: velocity,
            body_turn,
            gun_turn,
            radar_turn,
            fire_power,
        })
    }
}
