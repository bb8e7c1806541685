use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{clamp_turn, turn_towards, Bot, BotFault, Command, Observation, ThreatModel};
use crate::engine::{BotId, PhysicsConstants};
use crate::gametree::CANDIDATE_RADII;
use crate::geometry::{fit_arc, radar_sweep_back, solve_intercept, Angle, Pose};

/// Ticks between two radius decisions.
pub const EPOCH_TICKS: u32 = 16;

/// Largest gun error, in degrees, at which the gun may fire.
pub const GUN_ALIGN_TOLERANCE_DEG: f64 = 2.0;

/// Assumed opponent bullet speed for the threat model (a power-2 bullet).
const THREAT_BULLET_SPEED: f64 = 14.0;
const PREFERRED_DISTANCE: f64 = 220.0;
const WALL_MARGIN: f64 = 24.0;
const WALL_STICK: f64 = 90.0;
const STALE_TICKS: u32 = 12;
const MELEE_SPIN_EVERY: u32 = 36;
const MELEE_SPIN_TICKS: u32 = 8;
/// Chance of reversing the orbit at an epoch boundary.
const FLIP_CHANCE: f64 = 0.8;

/// One decision ring: the radius chosen at `epoch_start` for the next epoch.
#[derive(Debug, Clone, PartialEq)]
pub struct GameCircle {
    pub index: u32,
    pub candidate_radii: Vec<f64>,
    pub chosen_radius: f64,
    pub epoch_start: u32,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Sample {
    tick: u32,
    pose: Pose,
    velocity: f64,
    distance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Track {
    prev: Option<Sample>,
    last: Sample,
}

/// The game-circle bot.
///
/// Every [`EPOCH_TICKS`] ticks it runs an alpha-beta search over the nine
/// candidate radii and then orbits its target on arcs no tighter than the
/// chosen radius. The radar stays locked by sweeping back over the target,
/// and the gun leads the target along the arc fitted to its last two scans.
#[derive(Debug, Clone)]
pub struct TestRobot {
    rng: ChaCha8Rng,
    tracks: Vec<Option<Track>>,
    circle: Option<GameCircle>,
    orbit: f64,
    target: Option<BotId>,
}

impl TestRobot {
    pub fn new(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let orbit = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        TestRobot {
            rng,
            tracks: Vec::new(),
            circle: None,
            orbit,
            target: None,
        }
    }

    /// The current decision ring, once the first decision has been made.
    pub fn circle(&self) -> Option<&GameCircle> {
        self.circle.as_ref()
    }

    fn remember(&mut self, obs: &Observation) {
        for s in &obs.scans {
            let (x, y) = s.target_position(&obs.me.pose);
            let sample = Sample {
                tick: obs.tick,
                pose: Pose::new(x, y, s.target_heading),
                velocity: s.target_velocity,
                distance: s.distance,
            };
            if self.tracks.len() <= s.target {
                self.tracks.resize(s.target + 1, None);
            }
            let prev = self.tracks[s.target].map(|t| t.last);
            self.tracks[s.target] = Some(Track { prev, last: sample });
        }
    }

    fn fresh(&self, tick: u32) -> impl Iterator<Item = (BotId, &Track)> {
        self.tracks.iter().enumerate().filter_map(move |(i, t)| {
            t.as_ref()
                .filter(|t| tick.saturating_sub(t.last.tick) <= STALE_TICKS)
                .map(|t| (i, t))
        })
    }

    fn pick_target(&mut self, tick: u32) -> Option<Track> {
        let best = self
            .fresh(tick)
            .min_by(|a, b| a.1.last.distance.total_cmp(&b.1.last.distance))
            .map(|(i, t)| (i, *t));
        self.target = best.map(|(i, _)| i);
        best.map(|(_, t)| t)
    }

    fn next_circle(&mut self, obs: &Observation, target: Option<&Track>) {
        let due = match &self.circle {
            None => true,
            Some(c) => obs.tick >= c.epoch_start + EPOCH_TICKS,
        };
        if !due {
            return;
        }
        let me = obs.me.pose;
        let distance = target.map_or(obs.arena.0.max(obs.arena.1) / 2.0, |t| {
            me.distance_to(t.last.pose.x, t.last.pose.y)
        });
        let travel = if obs.me.velocity < 0.0 {
            me.heading + Angle::from_radians(PI)
        } else {
            me.heading
        };
        let clearance = clearance_ahead(&me, travel, obs.arena, obs.physics.half_size());
        let model = ThreatModel {
            distance,
            wall_clearance: clearance,
            bullet_speed: THREAT_BULLET_SPEED,
            physics: obs.physics,
        };
        let chosen = model.choose().unwrap_or(CANDIDATE_RADII[0]);
        let index = self.circle.as_ref().map_or(1, |c| c.index + 1);
        if index > 1 && self.rng.gen_bool(FLIP_CHANCE) {
            self.orbit = -self.orbit;
        }
        self.circle = Some(GameCircle {
            index,
            candidate_radii: CANDIDATE_RADII.to_vec(),
            chosen_radius: chosen,
            epoch_start: obs.tick,
        });
    }

    fn radar(&self, obs: &Observation, target: Option<&Track>) -> Angle {
        let p = &obs.physics;
        let spin = Angle::from_degrees(p.max_radar_turn);
        let melee_spin = obs.others > 1 && obs.tick % MELEE_SPIN_EVERY < MELEE_SPIN_TICKS;
        let Some(t) = target.filter(|t| t.last.tick == obs.tick && !melee_spin) else {
            return spin;
        };
        let me = obs.me.pose;
        let bearing = (Angle::of_vector(t.last.pose.x - me.x, t.last.pose.y - me.y) - me.heading)
            .normalized();
        // The sweep-back formula takes the bearing with left negative.
        let past = radar_sweep_back(obs.me.radar_heading, me.heading, -bearing)
            .unwrap_or(Angle::ZERO);
        let back = -past;
        let width = libm::atan(2.0 * p.half_size() / t.last.distance.max(1.0));
        let side = if back.radians() >= 0.0 { 1.0 } else { -1.0 };
        clamp_turn(back + Angle::from_radians(side * width), spin.radians())
    }

    fn movement(&mut self, obs: &Observation, target: Option<&Track>) -> (Angle, f64) {
        let p = &obs.physics;
        let me = obs.me.pose;
        let radius = self.circle.as_ref().map_or(CANDIDATE_RADII[0], |c| c.chosen_radius);
        let speed = p.speed_for_radius(radius).max(p.max_velocity * 0.5);
        let Some(t) = target else {
            return self.drive(obs, me.heading, speed, radius);
        };
        let to_target = Angle::of_vector(t.last.pose.x - me.x, t.last.pose.y - me.y);
        let distance = me.distance_to(t.last.pose.x, t.last.pose.y);
        let approach = ((distance - PREFERRED_DISTANCE) / PREFERRED_DISTANCE).clamp(-1.0, 1.0) * 0.5;
        let safe = |dir: f64| {
            let mut a = to_target + Angle::from_radians(dir * (PI / 2.0 - approach));
            for _ in 0..36 {
                if inside(&me, a, WALL_STICK, obs.arena, p.half_size() + WALL_MARGIN) {
                    return Some(a);
                }
                a = a - Angle::from_degrees(dir * 5.0);
            }
            None
        };
        let mut travel = safe(self.orbit);
        let blocked = travel.is_none_or(|a| {
            (a - to_target).normalized().radians().abs() < PI / 2.0 - 0.9
                && distance < PREFERRED_DISTANCE
        });
        if blocked {
            self.orbit = -self.orbit;
            travel = safe(self.orbit).or(travel);
        }
        let travel = travel.unwrap_or_else(|| {
            Angle::of_vector(obs.arena.0 / 2.0 - me.x, obs.arena.1 / 2.0 - me.y)
        });
        self.drive(obs, travel, speed, radius)
    }

    /// Body turn and velocity that head along `travel`, driving backwards
    /// when that is the shorter turn. Turning is capped to the arc of `radius`.
    fn drive(&self, obs: &Observation, travel: Angle, speed: f64, radius: f64) -> (Angle, f64) {
        let p = &obs.physics;
        let heading = obs.me.pose.heading;
        let mut turn = turn_towards(heading, travel);
        let mut v = speed;
        if turn.radians().abs() > PI / 2.0 {
            turn = (turn + Angle::from_radians(PI)).normalized();
            v = -v;
        }
        let vel = obs.me.velocity;
        let arc_cap = vel.abs().max(1.0) / radius;
        let cap = p.max_body_turn(vel).min(arc_cap.max(p.max_body_turn(p.max_velocity)));
        // Slow down for sharp turns so the arc can be followed.
        if turn.radians().abs() > 4.0 * cap {
            v *= 0.5;
        }
        (clamp_turn(turn, cap), v)
    }

    fn gun(&self, obs: &Observation, target: Option<&Track>, body_turn: Angle, v: f64) -> (Angle, Option<f64>) {
        let p = &obs.physics;
        let me = obs.me;
        let limit = Angle::from_degrees(p.max_gun_turn);
        let Some(t) = target.filter(|t| obs.tick.saturating_sub(t.last.tick) <= 2) else {
            return (Angle::ZERO, None);
        };
        let shooter = next_position(&me.pose, me.velocity, body_turn, v, p);
        let distance = libm::hypot(t.last.pose.x - shooter.0, t.last.pose.y - shooter.1);
        let mut power = if distance < 150.0 {
            3.0
        } else if distance < 400.0 {
            2.0
        } else {
            1.0
        };
        if me.energy < power + 0.5 {
            power = (me.energy / 4.0).min(power);
        }
        let aim = self.aim(obs, t, shooter, p.bullet_speed(power));
        let turn = turn_towards(me.gun_heading, aim);
        let applied = turn.clamp_magnitude(limit);
        let error = (turn - applied).radians().abs();
        let ready = me.gun_heat <= 1e-9 && power >= p.min_power;
        let fire = (ready && error <= GUN_ALIGN_TOLERANCE_DEG.to_radians()).then_some(power);
        (applied, fire)
    }

    fn aim(&self, obs: &Observation, t: &Track, shooter: (f64, f64), bullet_speed: f64) -> Angle {
        let last = t.last;
        // Between ticks a tank turns and then moves, so its path through the
        // sampled points is tangent to the heading rotated by half a step.
        let motion = t
            .prev
            .filter(|prev| last.tick > prev.tick && last.tick - prev.tick <= 3)
            .and_then(|prev| {
                let dt = f64::from(last.tick - prev.tick);
                let step = (last.pose.heading - prev.pose.heading).normalized().radians() / dt;
                let half = Angle::from_radians(step / 2.0);
                let a = Pose::new(prev.pose.x, prev.pose.y, prev.pose.heading + half);
                let b = Pose::new(last.pose.x, last.pose.y, last.pose.heading + half);
                fit_arc(a, b, dt).ok()
            });
        let head_on = Angle::of_vector(last.pose.x - shooter.0, last.pose.y - shooter.1);
        let Some(motion) = motion else {
            return head_on;
        };
        let Ok(hit) = solve_intercept(shooter, last.pose, last.velocity, motion, bullet_speed) else {
            return head_on;
        };
        let half = obs.physics.half_size();
        let x = hit.point.0.clamp(half, obs.arena.0 - half);
        let y = hit.point.1.clamp(half, obs.arena.1 - half);
        Angle::of_vector(x - shooter.0, y - shooter.1)
    }
}

impl Bot for TestRobot {
    fn decide(&mut self, obs: &Observation) -> Result<Command, BotFault> {
        self.remember(obs);
        let target = self.pick_target(obs.tick);
        self.next_circle(obs, target.as_ref());
        let radar_turn = self.radar(obs, target.as_ref());
        let (body_turn, target_velocity) = self.movement(obs, target.as_ref());
        let (gun_turn, fire_power) = self.gun(obs, target.as_ref(), body_turn, target_velocity);
        Ok(Command {
            target_velocity,
            body_turn,
            gun_turn,
            radar_turn,
            fire_power,
        })
    }
}

/// Free distance from `me` along `direction` before the tank would touch a wall.
fn clearance_ahead(me: &Pose, direction: Angle, arena: (f64, f64), half: f64) -> f64 {
    let (c, s) = (direction.cos(), direction.sin());
    let mut best = f64::INFINITY;
    for (pos, d, lo, hi) in [(me.x, c, half, arena.0 - half), (me.y, s, half, arena.1 - half)] {
        if d > 1e-12 {
            best = best.min((hi - pos) / d);
        } else if d < -1e-12 {
            best = best.min((lo - pos) / d);
        }
    }
    best.max(0.0)
}

fn inside(me: &Pose, direction: Angle, reach: f64, arena: (f64, f64), margin: f64) -> bool {
    let x = me.x + reach * direction.cos();
    let y = me.y + reach * direction.sin();
    x >= margin && x <= arena.0 - margin && y >= margin && y <= arena.1 - margin
}

/// Approximate position after this tick's move.
fn next_position(me: &Pose, velocity: f64, turn: Angle, goal: f64, p: &PhysicsConstants) -> (f64, f64) {
    let step = if goal > velocity {
        p.acceleration
    } else {
        p.deceleration
    };
    let v = velocity + (goal - velocity).clamp(-step, step);
    let h = me.heading + turn;
    (me.x + v * h.cos(), me.y + v * h.sin())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bots::ScanReport;
    use crate::engine::TankState;
    use alloc::vec;

    fn observation(tick: u32, scans: Vec<ScanReport>) -> Observation {
        Observation {
            tick,
            me: TankState {
                pose: Pose::new(400.0, 300.0, Angle::from_degrees(45.0)),
                gun_heading: Angle::from_degrees(45.0),
                radar_heading: Angle::from_degrees(90.0),
                velocity: 0.0,
                energy: 100.0,
                gun_heat: 0.0,
                alive: true,
            },
            scans,
            arena: (800.0, 600.0),
            others: 1,
            physics: PhysicsConstants::default(),
        }
    }

    fn scan(bearing_deg: f64, distance: f64) -> ScanReport {
        ScanReport {
            target: 1,
            bearing: Angle::from_degrees(bearing_deg),
            distance,
            target_heading: Angle::ZERO,
            target_velocity: 0.0,
        }
    }

    #[test]
    fn radar_sweeps_back_fifteen_degrees() {
        // Left-negative bearing -30 is +30 counterclockwise: the target sits at
        // 75 degrees while the radar points at 90.
        let mut bot = TestRobot::new(1);
        let cmd = bot.decide(&observation(5, vec![scan(30.0, 300.0)])).unwrap();
        let core = -15.0;
        let width = libm::atan(36.0 / 300.0).to_degrees();
        assert!((cmd.radar_turn.degrees() - (core - width)).abs() < 1e-9);
    }

    #[test]
    fn radar_spins_without_contact() {
        let mut bot = TestRobot::new(1);
        let cmd = bot.decide(&observation(0, vec![])).unwrap();
        assert_eq!(cmd.radar_turn.degrees().abs(), 45.0);
        assert_eq!(cmd.fire_power, None);
    }

    #[test]
    fn first_circle_uses_a_candidate() {
        let mut bot = TestRobot::new(3);
        bot.decide(&observation(0, vec![scan(10.0, 200.0)])).unwrap();
        let c = bot.circle().unwrap();
        assert_eq!(c.index, 1);
        assert_eq!(c.epoch_start, 0);
        assert!(CANDIDATE_RADII.contains(&c.chosen_radius));
    }

    #[test]
    fn single_scan_falls_back_to_head_on() {
        let mut bot = TestRobot::new(2);
        // Gun already on the target: bearing 0 from a 45 degree heading.
        let cmd = bot.decide(&observation(7, vec![scan(0.0, 100.0)])).unwrap();
        assert_eq!(cmd.fire_power, Some(3.0));
        assert!(cmd.gun_turn.degrees().abs() < 5.0);
    }

    #[test]
    fn commands_stay_within_limits() {
        let mut bot = TestRobot::new(4);
        let obs = observation(9, vec![scan(-120.0, 500.0)]);
        let cmd = bot.decide(&obs).unwrap();
        assert!(cmd.within_limits(&obs.physics, obs.me.velocity));
    }

    #[test]
    fn clearance_is_measured_along_travel() {
        let me = Pose::new(100.0, 300.0, Angle::ZERO);
        let ahead = clearance_ahead(&me, Angle::ZERO, (800.0, 600.0), 18.0);
        assert!((ahead - 682.0).abs() < 1e-9);
        let back = clearance_ahead(&me, Angle::from_degrees(180.0), (800.0, 600.0), 18.0);
        assert!((back - 82.0).abs() < 1e-9);
    }
}
