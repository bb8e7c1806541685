//! Plain-text `key = value` battle settings.
//!
//! Keys are the `BattleConfig` field names; physics constants take a
//! `physics.` prefix. `#` starts a comment.

use gamecircle_core::engine::{BattleConfig, PhysicsConstants};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum SettingsError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown key {key:?}")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: bad value for {key}: {value:?}")]
    BadValue {
        line: usize,
        key: String,
        value: String,
    },
    #[error("invalid settings: {0}")]
    Invalid(String),
}

/// `(line, key, value)` triples in file order.
pub fn parse_pairs(text: &str) -> Result<Vec<(usize, String, String)>, SettingsError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| SettingsError::Syntax {
            line: i + 1,
            message: format!("expected key = value, found {content:?}"),
        })?;
        out.push((i + 1, key.trim().to_string(), value.trim().to_string()));
    }
    Ok(out)
}

fn physics_slot<'a>(p: &'a mut PhysicsConstants, name: &str) -> Option<&'a mut f64> {
    Some(match name {
        "max_velocity" => &mut p.max_velocity,
        "acceleration" => &mut p.acceleration,
        "deceleration" => &mut p.deceleration,
        "max_body_turn_base" => &mut p.max_body_turn_base,
        "velocity_penalty" => &mut p.velocity_penalty,
        "max_gun_turn" => &mut p.max_gun_turn,
        "max_radar_turn" => &mut p.max_radar_turn,
        "bullet_speed_base" => &mut p.bullet_speed_base,
        "bullet_speed_slope" => &mut p.bullet_speed_slope,
        "min_power" => &mut p.min_power,
        "max_power" => &mut p.max_power,
        "tank_size" => &mut p.tank_size,
        "radar_range" => &mut p.radar_range,
        "inactivity_decay" => &mut p.inactivity_decay,
        "initial_gun_heat" => &mut p.initial_gun_heat,
        _ => return None,
    })
}

const PHYSICS_KEYS: [&str; 15] = [
    "max_velocity",
    "acceleration",
    "deceleration",
    "max_body_turn_base",
    "velocity_penalty",
    "max_gun_turn",
    "max_radar_turn",
    "bullet_speed_base",
    "bullet_speed_slope",
    "min_power",
    "max_power",
    "tank_size",
    "radar_range",
    "inactivity_decay",
    "initial_gun_heat",
];

/// Sets one field. Returns `Ok(false)` when `key` is not a settings key.
pub fn apply(config: &mut BattleConfig, line: usize, key: &str, value: &str) -> Result<bool, SettingsError> {
    let bad = || SettingsError::BadValue {
        line,
        key: key.to_string(),
        value: value.to_string(),
    };
    let float = || value.parse::<f64>().map_err(|_| bad());
    let int = || value.parse::<u32>().map_err(|_| bad());
    match key {
        "arena_width" => config.arena_width = float()?,
        "arena_height" => config.arena_height = float()?,
        "rounds" => config.rounds = int()?,
        "gun_cooling_rate" => config.gun_cooling_rate = float()?,
        "inactivity_time" => config.inactivity_time = int()?,
        "sentry_border_size" => config.sentry_border_size = float()?,
        "initial_energy" => config.initial_energy = float()?,
        "max_ticks" => config.max_ticks = int()?,
        "seed" => config.seed = value.parse::<u64>().map_err(|_| bad())?,
        _ => {
            let Some(slot) = key
                .strip_prefix("physics.")
                .and_then(|name| physics_slot(&mut config.physics, name))
            else {
                return Ok(false);
            };
            *slot = float()?;
        }
    }
    Ok(true)
}

/// Reads settings on top of the defaults and validates the result.
pub fn parse_config(text: &str) -> Result<BattleConfig, SettingsError> {
    let mut config = BattleConfig::default();
    for (line, key, value) in parse_pairs(text)? {
        if !apply(&mut config, line, &key, &value)? {
            return Err(SettingsError::UnknownKey { line, key });
        }
    }
    config
        .validate()
        .map_err(|e| SettingsError::Invalid(e.to_string()))?;
    Ok(config)
}

/// Every key, one per line. Floats keep their exact value.
pub fn write_config(config: &BattleConfig) -> String {
    let mut out = String::new();
    let mut line = |k: &str, v: String| {
        out.push_str(k);
        out.push_str(" = ");
        out.push_str(&v);
        out.push('\n');
    };
    line("arena_width", format!("{:?}", config.arena_width));
    line("arena_height", format!("{:?}", config.arena_height));
    line("rounds", config.rounds.to_string());
    line("gun_cooling_rate", format!("{:?}", config.gun_cooling_rate));
    line("inactivity_time", config.inactivity_time.to_string());
    line("sentry_border_size", format!("{:?}", config.sentry_border_size));
    line("initial_energy", format!("{:?}", config.initial_energy));
    line("max_ticks", config.max_ticks.to_string());
    line("seed", config.seed.to_string());
    let mut physics = config.physics;
    for name in PHYSICS_KEYS {
        let v = *physics_slot(&mut physics, name).expect("listed key");
        line(&format!("physics.{name}"), format!("{v:?}"));
    }
    out
}
