//! Deterministic tick-based battle simulation.
//!
//! Each tick runs, in order: bullet advance and hit tests, movement, wall
//! collisions, gun cooling, firing, radar sweeps, inactivity decay and
//! finally deaths. Guns may only fire when they were already cool at the
//! start of the tick.

mod config;
mod event;
mod round;

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bots::{Command, Observation, ScanReport};
use crate::geometry::{Angle, Pose};
use crate::tournament::ScoreError;

pub use config::{BattleConfig, ConfigError, PhysicsConstants};
pub use event::{BattleEvent, BotId, EventKind, FaultKind, ParseEventError};
pub use round::{
    derive_seed, run_battle, run_round, BattleResult, BotFactory, RoundOutcome, MAX_FAULTS,
    MAX_REPLAYS,
};

#[derive(Debug, Clone, PartialEq)]
pub enum EngineError {
    Config(ConfigError),
    RosterTooSmall(usize),
    ArenaTooSmall { bots: usize },
    /// A duel round kept ending in simultaneous destruction with equal damage.
    Unresolved { round: u32 },
    Scoring(ScoreError),
}

impl fmt::Display for EngineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EngineError::Config(e) => write!(f, "invalid config: {e}"),
            EngineError::RosterTooSmall(n) => write!(f, "need at least 2 bots, got {n}"),
            EngineError::ArenaTooSmall { bots } => {
                write!(f, "arena cannot hold {bots} non-overlapping tanks")
            }
            EngineError::Unresolved { round } => {
                write!(f, "round {round} could not be resolved after replays")
            }
            EngineError::Scoring(e) => write!(f, "scoring failed: {e}"),
        }
    }
}

impl core::error::Error for EngineError {}

impl From<ConfigError> for EngineError {
    fn from(e: ConfigError) -> Self {
        EngineError::Config(e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TankState {
    pub pose: Pose,
    pub gun_heading: Angle,
    pub radar_heading: Angle,
    pub velocity: f64,
    pub energy: f64,
    pub gun_heat: f64,
    pub alive: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bullet {
    pub id: u32,
    pub owner: BotId,
    pub x: f64,
    pub y: f64,
    pub heading: Angle,
    pub power: f64,
}

const HEAT_EPSILON: f64 = 1e-9;
const PLACEMENT_ATTEMPTS: usize = 1000;

/// Mutable state of one round.
#[derive(Debug, Clone)]
pub struct BattleState {
    config: BattleConfig,
    round: u32,
    seed: u64,
    tick: u32,
    tanks: Vec<TankState>,
    bullets: Vec<Bullet>,
    next_bullet: u32,
    idle_ticks: u32,
    damage_dealt: Vec<f64>,
    death_tick: Vec<Option<u32>>,
    scans: Vec<Vec<ScanReport>>,
}

impl BattleState {
    /// Places `bots` tanks at seeded random, non-overlapping spots with full energy.
    pub fn new(config: BattleConfig, bots: usize, round: u32, seed: u64) -> Result<Self, EngineError> {
        config.validate()?;
        if bots < 2 {
            return Err(EngineError::RosterTooSmall(bots));
        }
        let size = config.physics.tank_size;
        let half = config.physics.half_size();
        let cols = libm::floor(config.arena_width / size) as usize;
        let rows = libm::floor(config.arena_height / size) as usize;
        if cols * rows < bots {
            return Err(EngineError::ArenaTooSmall { bots });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut tanks: Vec<TankState> = Vec::with_capacity(bots);
        for _ in 0..bots {
            let mut placed = None;
            for _ in 0..PLACEMENT_ATTEMPTS {
                let x = rng.gen_range(half..=config.arena_width - half);
                let y = rng.gen_range(half..=config.arena_height - half);
                let clear = tanks
                    .iter()
                    .all(|t| (t.pose.x - x).abs() >= size || (t.pose.y - y).abs() >= size);
                if clear {
                    placed = Some((x, y));
                    break;
                }
            }
            let (x, y) = placed.ok_or(EngineError::ArenaTooSmall { bots })?;
            let heading = Angle::from_radians(rng.gen_range(-PI..PI));
            tanks.push(TankState {
                pose: Pose::new(x, y, heading),
                gun_heading: heading,
                radar_heading: heading,
                velocity: 0.0,
                energy: config.initial_energy,
                gun_heat: config.physics.initial_gun_heat,
                alive: true,
            });
        }
        Ok(BattleState {
            config,
            round,
            seed,
            tick: 0,
            tanks,
            bullets: Vec::new(),
            next_bullet: 0,
            idle_ticks: 0,
            damage_dealt: vec![0.0; bots],
            death_tick: vec![None; bots],
            scans: vec![Vec::new(); bots],
        })
    }

    pub fn config(&self) -> &BattleConfig {
        &self.config
    }

    pub fn round(&self) -> u32 {
        self.round
    }

    pub fn tick_count(&self) -> u32 {
        self.tick
    }

    pub fn tanks(&self) -> &[TankState] {
        &self.tanks
    }

    pub fn bullets(&self) -> &[Bullet] {
        &self.bullets
    }

    pub fn damage_dealt(&self) -> &[f64] {
        &self.damage_dealt
    }

    pub fn death_ticks(&self) -> &[Option<u32>] {
        &self.death_tick
    }

    pub fn alive_count(&self) -> usize {
        self.tanks.iter().filter(|t| t.alive).count()
    }

    /// One survivor left, or the tick cap reached.
    pub fn is_over(&self) -> bool {
        self.alive_count() <= 1 || self.tick >= self.config.max_ticks
    }

    /// Overwrites a tank, e.g. to stage a scenario.
    pub fn set_tank(&mut self, bot: BotId, tank: TankState) {
        self.tanks[bot] = tank;
    }

    /// Launches a bullet without the firing rules (no heat, no energy cost).
    pub fn inject_bullet(&mut self, owner: BotId, x: f64, y: f64, heading: Angle, power: f64) -> u32 {
        let id = self.next_bullet;
        self.next_bullet += 1;
        self.bullets.push(Bullet {
            id,
            owner,
            x,
            y,
            heading,
            power,
        });
        id
    }

    /// `round_start` followed by one `spawn` per tank.
    pub fn start_events(&self) -> Vec<BattleEvent> {
        let mut out = Vec::with_capacity(self.tanks.len() + 1);
        out.push(self.event(EventKind::RoundStart {
            bots: self.tanks.len(),
            seed: self.seed,
        }));
        for (bot, t) in self.tanks.iter().enumerate() {
            out.push(self.event(EventKind::Spawn {
                bot,
                x: t.pose.x,
                y: t.pose.y,
                heading: t.pose.heading.radians(),
                energy: t.energy,
            }));
        }
        out
    }

    /// What `bot` sees before deciding its next command.
    pub fn observe(&self, bot: BotId) -> Observation {
        Observation {
            tick: self.tick,
            me: self.tanks[bot],
            scans: self.scans[bot].clone(),
            arena: (self.config.arena_width, self.config.arena_height),
            others: self.alive_count().saturating_sub(usize::from(self.tanks[bot].alive)),
            physics: self.config.physics,
        }
    }

    fn event(&self, kind: EventKind) -> BattleEvent {
        BattleEvent {
            round: self.round,
            tick: self.tick,
            kind,
        }
    }

    fn sanitize(&self, commands: &[Option<Command>], events: &mut Vec<BattleEvent>) -> Vec<Command> {
        let p = &self.config.physics;
        (0..self.tanks.len())
            .map(|bot| {
                let cmd = commands.get(bot).copied().flatten();
                let tank = &self.tanks[bot];
                match cmd {
                    Some(_) if !tank.alive => {
                        events.push(self.event(EventKind::Fault {
                            bot,
                            reason: FaultKind::DeadCommand,
                        }));
                        Command::idle()
                    }
                    Some(c) if !c.is_finite() => {
                        events.push(self.event(EventKind::Fault {
                            bot,
                            reason: FaultKind::NonFinite,
                        }));
                        Command::idle()
                    }
                    Some(c) => Command {
                        target_velocity: c.target_velocity.clamp(-p.max_velocity, p.max_velocity),
                        body_turn: c
                            .body_turn
                            .clamp_magnitude(Angle::from_radians(p.max_body_turn(tank.velocity))),
                        gun_turn: c.gun_turn.clamp_magnitude(Angle::from_degrees(p.max_gun_turn)),
                        radar_turn: c
                            .radar_turn
                            .clamp_magnitude(Angle::from_degrees(p.max_radar_turn)),
                        fire_power: c.fire_power.map(|f| f.clamp(p.min_power, p.max_power)),
                    },
                    None => Command::idle(),
                }
            })
            .collect()
    }

    /// Advances one tick. `commands[i]` is bot `i`'s request; `None` idles it.
    pub fn tick(&mut self, commands: &[Option<Command>]) -> Vec<BattleEvent> {
        self.tick += 1;
        let mut events = Vec::new();
        let commands = self.sanitize(commands, &mut events);
        let n = self.tanks.len();
        let mut last_hit_by: Vec<Option<BotId>> = vec![None; n];
        let damage_before: f64 = self.damage_dealt.iter().sum();

        self.advance_bullets(&mut events, &mut last_hit_by);
        self.move_tanks(&commands, &mut events);
        let ready: Vec<bool> = self
            .tanks
            .iter()
            .map(|t| t.gun_heat <= HEAT_EPSILON)
            .collect();
        self.cool_guns();
        self.fire(&commands, &ready, &mut events);
        self.sweep_radars(&commands, &mut events);

        let dealt: f64 = self.damage_dealt.iter().sum();
        if dealt > damage_before {
            self.idle_ticks = 0;
        } else {
            self.idle_ticks += 1;
        }
        if self.idle_ticks > self.config.inactivity_time {
            self.decay(&mut events);
        }
        self.deaths(&last_hit_by, &mut events);
        events
    }

    fn advance_bullets(&mut self, events: &mut Vec<BattleEvent>, last_hit_by: &mut [Option<BotId>]) {
        let p = self.config.physics;
        let half = p.half_size();
        let (w, h) = (self.config.arena_width, self.config.arena_height);
        let bullets = core::mem::take(&mut self.bullets);
        for mut b in bullets {
            let speed = p.bullet_speed(b.power);
            let (dx, dy) = (speed * b.heading.cos(), speed * b.heading.sin());
            let mut hit: Option<(f64, BotId)> = None;
            for (i, t) in self.tanks.iter().enumerate() {
                if !t.alive || i == b.owner {
                    continue;
                }
                if let Some(s) = segment_box(b.x, b.y, dx, dy, t.pose.x, t.pose.y, half) {
                    if hit.is_none_or(|(best, _)| s < best) {
                        hit = Some((s, i));
                    }
                }
            }
            if let Some((s, victim)) = hit {
                let (hx, hy) = (b.x + s * dx, b.y + s * dy);
                let damage = p.bullet_damage(b.power).min(self.tanks[victim].energy);
                self.tanks[victim].energy -= damage;
                let gain = if self.tanks[b.owner].alive {
                    p.hit_gain(b.power)
                } else {
                    0.0
                };
                self.tanks[b.owner].energy += gain;
                self.damage_dealt[b.owner] += damage;
                last_hit_by[victim] = Some(b.owner);
                events.push(self.event(EventKind::BulletHit {
                    bullet: b.id,
                    shooter: b.owner,
                    victim,
                    damage,
                    gain,
                    x: hx,
                    y: hy,
                }));
                continue;
            }
            b.x += dx;
            b.y += dy;
            if b.x < 0.0 || b.x > w || b.y < 0.0 || b.y > h {
                events.push(self.event(EventKind::BulletMiss {
                    bullet: b.id,
                    shooter: b.owner,
                    x: b.x,
                    y: b.y,
                }));
            } else {
                self.bullets.push(b);
            }
        }
    }

    fn move_tanks(&mut self, commands: &[Command], events: &mut Vec<BattleEvent>) {
        let p = self.config.physics;
        let half = p.half_size();
        let (w, h) = (self.config.arena_width, self.config.arena_height);
        for bot in 0..self.tanks.len() {
            let cmd = commands[bot];
            let t = &mut self.tanks[bot];
            if !t.alive {
                continue;
            }
            t.pose.heading = (t.pose.heading + cmd.body_turn).normalized();
            t.velocity = next_velocity(t.velocity, cmd.target_velocity, &p);
            t.pose.x += t.velocity * t.pose.heading.cos();
            t.pose.y += t.velocity * t.pose.heading.sin();
            t.gun_heading = (t.gun_heading + cmd.gun_turn).normalized();

            let cx = t.pose.x.clamp(half, w - half);
            let cy = t.pose.y.clamp(half, h - half);
            if cx != t.pose.x || cy != t.pose.y {
                let damage = p.wall_damage(t.velocity).min(t.energy);
                t.pose.x = cx;
                t.pose.y = cy;
                t.velocity = 0.0;
                t.energy -= damage;
                let e = BattleEvent {
                    round: self.round,
                    tick: self.tick,
                    kind: EventKind::WallHit {
                        bot,
                        damage,
                        x: cx,
                        y: cy,
                    },
                };
                events.push(e);
            }
        }
    }

    fn cool_guns(&mut self) {
        let rate = self.config.gun_cooling_rate;
        for t in self.tanks.iter_mut().filter(|t| t.alive) {
            t.gun_heat = (t.gun_heat - rate).max(0.0);
            if t.gun_heat < HEAT_EPSILON {
                t.gun_heat = 0.0;
            }
        }
    }

    fn fire(&mut self, commands: &[Command], ready: &[bool], events: &mut Vec<BattleEvent>) {
        let p = self.config.physics;
        for bot in 0..self.tanks.len() {
            let Some(power) = commands[bot].fire_power else {
                continue;
            };
            let t = self.tanks[bot];
            if !t.alive || !ready[bot] || t.energy <= power {
                continue;
            }
            let id = self.inject_bullet(bot, t.pose.x, t.pose.y, t.gun_heading, power);
            let tank = &mut self.tanks[bot];
            tank.energy -= power;
            tank.gun_heat += p.gun_heat(power);
            events.push(self.event(EventKind::Fire {
                bot,
                bullet: id,
                power,
                x: t.pose.x,
                y: t.pose.y,
                heading: t.gun_heading.radians(),
            }));
        }
    }

    fn sweep_radars(&mut self, commands: &[Command], events: &mut Vec<BattleEvent>) {
        let p = self.config.physics;
        let half = p.half_size();
        for bot in 0..self.tanks.len() {
            self.scans[bot].clear();
            if !self.tanks[bot].alive {
                continue;
            }
            let start = self.tanks[bot].radar_heading;
            let turn = commands[bot].radar_turn.radians();
            self.tanks[bot].radar_heading = (start + commands[bot].radar_turn).normalized();
            let me = self.tanks[bot];
            for (target, t) in self.tanks.iter().enumerate() {
                if target == bot || !t.alive {
                    continue;
                }
                let (dx, dy) = (t.pose.x - me.pose.x, t.pose.y - me.pose.y);
                let distance = libm::hypot(dx, dy);
                if distance > p.radar_range || distance == 0.0 {
                    continue;
                }
                let direction = Angle::of_vector(dx, dy);
                let width = libm::atan(half / distance);
                let offset = (direction - start).normalized().radians();
                let (lo, hi) = if turn >= 0.0 { (0.0, turn) } else { (turn, 0.0) };
                if offset < lo - width || offset > hi + width {
                    continue;
                }
                let report = ScanReport {
                    target,
                    bearing: (direction - me.pose.heading).normalized(),
                    distance,
                    target_heading: t.pose.heading,
                    target_velocity: t.velocity,
                };
                events.push(BattleEvent {
                    round: self.round,
                    tick: self.tick,
                    kind: EventKind::Scan {
                        scanner: bot,
                        target,
                        bearing: report.bearing.radians(),
                        distance,
                        heading: report.target_heading.radians(),
                        velocity: report.target_velocity,
                    },
                });
                self.scans[bot].push(report);
            }
        }
    }

    fn decay(&mut self, events: &mut Vec<BattleEvent>) {
        let rate = self.config.physics.inactivity_decay;
        for bot in 0..self.tanks.len() {
            let t = &mut self.tanks[bot];
            if !t.alive {
                continue;
            }
            let amount = rate.min(t.energy);
            t.energy -= amount;
            events.push(self.event(EventKind::Decay { bot, amount }));
        }
    }

    fn deaths(&mut self, last_hit_by: &[Option<BotId>], events: &mut Vec<BattleEvent>) {
        for bot in 0..self.tanks.len() {
            let t = &mut self.tanks[bot];
            if t.alive && t.energy <= 0.0 {
                t.alive = false;
                t.energy = 0.0;
                t.velocity = 0.0;
                self.death_tick[bot] = Some(self.tick);
                events.push(self.event(EventKind::RobotDeath {
                    bot,
                    killer: last_hit_by[bot],
                }));
            }
        }
        if self.alive_count() == 0 {
            self.bullets.clear();
        }
    }

    /// Final ranking, best first: survivors by energy, then the dead in
    /// reverse death order. Ties go to more damage dealt, then lower index.
    pub fn placements(&self) -> Vec<BotId> {
        let mut order: Vec<BotId> = (0..self.tanks.len()).collect();
        order.sort_by(|&a, &b| {
            let ta = &self.tanks[a];
            let tb = &self.tanks[b];
            let key = |t: &TankState, d: Option<u32>| match (t.alive, d) {
                (true, _) => (1u8, u32::MAX),
                (false, Some(tick)) => (0, tick),
                (false, None) => (0, 0),
            };
            key(tb, self.death_tick[b])
                .cmp(&key(ta, self.death_tick[a]))
                .then_with(|| {
                    if ta.alive && tb.alive {
                        tb.energy.total_cmp(&ta.energy)
                    } else {
                        core::cmp::Ordering::Equal
                    }
                })
                .then_with(|| self.damage_dealt[b].total_cmp(&self.damage_dealt[a]))
                .then_with(|| a.cmp(&b))
        });
        order
    }

    /// Closes the round with a `round_end` event.
    pub fn end_event(&self) -> BattleEvent {
        self.event(EventKind::RoundEnd {
            placements: self.placements(),
            energies: self.tanks.iter().map(|t| t.energy).collect(),
        })
    }
}

fn next_velocity(v: f64, goal: f64, p: &PhysicsConstants) -> f64 {
    let goal = goal.clamp(-p.max_velocity, p.max_velocity);
    let same_way = v == 0.0 || goal == 0.0 || v.signum() == goal.signum();
    if same_way {
        if goal.abs() > v.abs() {
            return v + goal.signum() * p.acceleration.min(goal.abs() - v.abs());
        }
        return v - v.signum() * p.deceleration.min(v.abs() - goal.abs());
    }
    // Reversing: brake first, then spend what is left of the tick accelerating.
    if v.abs() >= p.deceleration {
        return v - v.signum() * p.deceleration;
    }
    let left = 1.0 - v.abs() / p.deceleration;
    goal.signum() * (p.acceleration * left).min(goal.abs())
}

/// Earliest parameter `s` in `[0, 1]` at which `(x, y) + s (dx, dy)` touches
/// the square of half-size `half` centred on `(cx, cy)`.
fn segment_box(x: f64, y: f64, dx: f64, dy: f64, cx: f64, cy: f64, half: f64) -> Option<f64> {
    let mut lo: f64 = 0.0;
    let mut hi: f64 = 1.0;
    for (p, d, c) in [(x, dx, cx), (y, dy, cy)] {
        let (min, max) = (c - half, c + half);
        if d.abs() < 1e-15 {
            if p < min || p > max {
                return None;
            }
            continue;
        }
        let mut t0 = (min - p) / d;
        let mut t1 = (max - p) / d;
        if t0 > t1 {
            core::mem::swap(&mut t0, &mut t1);
        }
        lo = lo.max(t0);
        hi = hi.min(t1);
        if lo > hi {
            return None;
        }
    }
    Some(lo)
}
