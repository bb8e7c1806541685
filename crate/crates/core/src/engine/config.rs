use core::fmt;

/// Movement, gun and bullet rules.
///
/// Turn rates are in degrees per tick, the unit the rule table is written in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicsConstants {
    pub max_velocity: f64,
    pub acceleration: f64,
    pub deceleration: f64,
    /// Body turn limit is `max_body_turn_base - velocity_penalty * |v|` degrees.
    pub max_body_turn_base: f64,
    pub velocity_penalty: f64,
    pub max_gun_turn: f64,
    pub max_radar_turn: f64,
    /// Bullet speed is `bullet_speed_base - bullet_speed_slope * power`.
    pub bullet_speed_base: f64,
    pub bullet_speed_slope: f64,
    pub min_power: f64,
    pub max_power: f64,
    pub tank_size: f64,
    pub radar_range: f64,
    /// Energy lost per tick once the inactivity timer has run out.
    pub inactivity_decay: f64,
    /// Heat left in every gun at the start of a round.
    pub initial_gun_heat: f64,
}

impl Default for PhysicsConstants {
    fn default() -> Self {
        PhysicsConstants {
            max_velocity: 8.0,
            acceleration: 1.0,
            deceleration: 2.0,
            max_body_turn_base: 10.0,
            velocity_penalty: 0.75,
            max_gun_turn: 20.0,
            max_radar_turn: 45.0,
            bullet_speed_base: 20.0,
            bullet_speed_slope: 3.0,
            min_power: 0.1,
            max_power: 3.0,
            tank_size: 36.0,
            radar_range: 1200.0,
            inactivity_decay: 0.1,
            initial_gun_heat: 3.0,
        }
    }
}

impl PhysicsConstants {
    pub fn bullet_speed(&self, power: f64) -> f64 {
        self.bullet_speed_base - self.bullet_speed_slope * power
    }

    pub fn bullet_damage(&self, power: f64) -> f64 {
        let mut damage = 4.0 * power;
        if power > 1.0 {
            damage += 2.0 * (power - 1.0);
        }
        damage
    }

    /// Energy returned to the shooter on a hit.
    pub fn hit_gain(&self, power: f64) -> f64 {
        3.0 * power
    }

    pub fn gun_heat(&self, power: f64) -> f64 {
        1.0 + power / 5.0
    }

    /// Radians per tick the body may turn at speed `velocity`.
    pub fn max_body_turn(&self, velocity: f64) -> f64 {
        (self.max_body_turn_base - self.velocity_penalty * velocity.abs())
            .max(0.0)
            .to_radians()
    }

    pub fn wall_damage(&self, velocity: f64) -> f64 {
        (velocity.abs() / 2.0 - 1.0).max(0.0)
    }

    pub fn half_size(&self) -> f64 {
        self.tank_size / 2.0
    }

    /// Top speed at which an arc of `radius` can be followed without exceeding the turn limit.
    pub fn speed_for_radius(&self, radius: f64) -> f64 {
        // v / r = (base - penalty * v) * pi / 180
        let k = core::f64::consts::PI / 180.0;
        let v = self.max_body_turn_base * k / (1.0 / radius + self.velocity_penalty * k);
        v.min(self.max_velocity)
    }

    fn check(&self) -> Result<(), ConfigError> {
        let fields = [
            ("max_velocity", self.max_velocity),
            ("acceleration", self.acceleration),
            ("deceleration", self.deceleration),
            ("max_body_turn_base", self.max_body_turn_base),
            ("velocity_penalty", self.velocity_penalty),
            ("max_gun_turn", self.max_gun_turn),
            ("max_radar_turn", self.max_radar_turn),
            ("bullet_speed_base", self.bullet_speed_base),
            ("bullet_speed_slope", self.bullet_speed_slope),
            ("min_power", self.min_power),
            ("max_power", self.max_power),
            ("tank_size", self.tank_size),
            ("radar_range", self.radar_range),
            ("inactivity_decay", self.inactivity_decay),
            ("initial_gun_heat", self.initial_gun_heat),
        ];
        for (name, v) in fields {
            if !(v.is_finite() && v > 0.0) {
                return Err(ConfigError::NotPositive(name));
            }
        }
        if self.min_power >= self.max_power {
            return Err(ConfigError::PowerRange);
        }
        if self.bullet_speed(self.max_power) <= 0.0 {
            return Err(ConfigError::NotPositive("bullet_speed(max_power)"));
        }
        Ok(())
    }
}

/// Battle rules and seed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BattleConfig {
    pub arena_width: f64,
    pub arena_height: f64,
    pub rounds: u32,
    pub gun_cooling_rate: f64,
    pub inactivity_time: u32,
    /// Accepted for fidelity with the platform settings; no shipped bot is a sentry.
    pub sentry_border_size: f64,
    pub initial_energy: f64,
    /// Rounds still running after this many ticks are ended and ranked by energy.
    pub max_ticks: u32,
    pub seed: u64,
    pub physics: PhysicsConstants,
}

impl Default for BattleConfig {
    fn default() -> Self {
        BattleConfig {
            arena_width: 800.0,
            arena_height: 600.0,
            rounds: 30,
            gun_cooling_rate: 0.1,
            inactivity_time: 450,
            sentry_border_size: 100.0,
            initial_energy: 100.0,
            max_ticks: 20_000,
            seed: 1,
            physics: PhysicsConstants::default(),
        }
    }
}

impl BattleConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let fields = [
            ("arena_width", self.arena_width),
            ("arena_height", self.arena_height),
            ("gun_cooling_rate", self.gun_cooling_rate),
            ("sentry_border_size", self.sentry_border_size),
            ("initial_energy", self.initial_energy),
        ];
        for (name, v) in fields {
            if !(v.is_finite() && v > 0.0) {
                return Err(ConfigError::NotPositive(name));
            }
        }
        if self.rounds == 0 {
            return Err(ConfigError::NotPositive("rounds"));
        }
        if self.inactivity_time == 0 {
            return Err(ConfigError::NotPositive("inactivity_time"));
        }
        if self.max_ticks == 0 {
            return Err(ConfigError::NotPositive("max_ticks"));
        }
        self.physics.check()?;
        if self.arena_width < self.physics.tank_size || self.arena_height < self.physics.tank_size {
            return Err(ConfigError::ArenaTooSmall);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConfigError {
    NotPositive(&'static str),
    PowerRange,
    ArenaTooSmall,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::NotPositive(name) => write!(f, "{name} must be positive"),
            ConfigError::PowerRange => write!(f, "min_power must be below max_power"),
            ConfigError::ArenaTooSmall => write!(f, "arena smaller than a tank"),
        }
    }
}

impl core::error::Error for ConfigError {}
