//! Text tables, CSV rows, plot data, event logs and run manifests.

use std::fmt::Write as _;

use gamecircle_core::engine::{BattleConfig, BattleResult};
use gamecircle_core::tournament::{relative_total, ScoreEntry};
use sha2::{Digest, Sha256};

use crate::settings::{apply, parse_pairs, write_config, SettingsError};

pub const SCORES_CSV_HEADER: &str = "rank,name,total_score,share_percent,survival_score,last_survivor_bonus,bullet_damage,bullet_bonus,ram_damage,firsts,seconds,thirds,wins";

pub const SERIES_CSV_HEADER: &str = "bot_a,bot_b,total_a,total_b,survival_a,survival_b,bullet_damage_a,bullet_damage_b,bullet_bonus_a,bullet_bonus_b,wins_a,wins_b,relative_total";

fn ordinal(n: usize) -> String {
    let suffix = match (n % 10, n % 100) {
        (_, 11..=13) => "th",
        (1, _) => "st",
        (2, _) => "nd",
        (3, _) => "rd",
        _ => "th",
    };
    format!("{n}{suffix}")
}

fn shares(result: &BattleResult) -> Vec<f64> {
    result
        .board
        .score_share()
        .unwrap_or_else(|_| vec![0.0; result.board.entries.len()])
}

/// Ranked score table, best total first.
pub fn scores_table(result: &BattleResult) -> String {
    let board = &result.board;
    let share = shares(result);
    let mut out = format!(
        "{:<5} {:<10} {:>13} {:>9} {:>10} {:>10} {:>8} {:>7} {:>5} {:>5} {:>5} {:>5}\n",
        "Rank", "Robot Name", "Total Score", "Survival", "Surv Bonus", "Bullet Dmg",
        "Bonus", "Ram Dmg", "1sts", "2nds", "3rds", "Wins"
    );
    for (place, i) in board.ranking().into_iter().enumerate() {
        let e = &board.entries[i];
        let total = format!("{:.0} ({:.0}%)", e.total_score, share[i]);
        let _ = writeln!(
            out,
            "{:<5} {:<10} {:>13} {:>9.0} {:>10.0} {:>10.0} {:>8.0} {:>7.0} {:>5} {:>5} {:>5} {:>5}",
            ordinal(place + 1),
            e.name,
            total,
            e.survival_score,
            e.last_survivor_bonus,
            e.bullet_damage,
            e.bullet_bonus,
            e.ram_damage,
            e.firsts,
            e.seconds,
            e.thirds,
            e.wins
        );
    }
    out
}

/// One row per bot under [`SCORES_CSV_HEADER`].
pub fn scores_csv(result: &BattleResult) -> String {
    let board = &result.board;
    let share = shares(result);
    let mut out = format!("{SCORES_CSV_HEADER}\n");
    for (place, i) in board.ranking().into_iter().enumerate() {
        let e = &board.entries[i];
        let _ = writeln!(
            out,
            "{},{},{:?},{:?},{:?},{:?},{:?},{:?},{:?},{},{},{},{}",
            place + 1,
            e.name,
            e.total_score,
            share[i],
            e.survival_score,
            e.last_survivor_bonus,
            e.bullet_damage,
            e.bullet_bonus,
            e.ram_damage,
            e.firsts,
            e.seconds,
            e.thirds,
            e.wins
        );
    }
    out
}

pub fn events_log(result: &BattleResult) -> String {
    let mut out = String::new();
    for e in result.events() {
        let _ = writeln!(out, "{e}");
    }
    out
}

type Metric = (&'static str, fn(&ScoreEntry) -> f64);

pub const DUEL_METRICS: [Metric; 5] = [
    ("total_score", |e| e.total_score),
    ("survival", |e| e.survival_score),
    ("bullet_damage", |e| e.bullet_damage),
    ("bullet_bonus", |e| e.bullet_bonus),
    ("wins", |e| f64::from(e.wins)),
];

pub const MELEE_METRICS: [Metric; 7] = [
    ("total_score", |e| e.total_score),
    ("survival", |e| e.survival_score),
    ("bullet_damage", |e| e.bullet_damage),
    ("bullet_bonus", |e| e.bullet_bonus),
    ("firsts", |e| f64::from(e.firsts)),
    ("seconds", |e| f64::from(e.seconds)),
    ("thirds", |e| f64::from(e.thirds)),
];

/// `category,bot,value` rows for charting.
pub fn plot_data<'a>(
    boards: impl IntoIterator<Item = (&'a str, &'a BattleResult)>,
    metrics: &[Metric],
) -> String {
    let mut out = String::from("category,bot,value\n");
    for (prefix, result) in boards {
        for (name, metric) in metrics {
            for e in &result.board.entries {
                let category = if prefix.is_empty() {
                    name.to_string()
                } else {
                    format!("{prefix}/{name}")
                };
                let _ = writeln!(out, "{category},{},{:?}", e.name, metric(e));
            }
        }
    }
    out
}

/// Side-by-side duel table: one row per pairing, slot 0 on the left.
pub fn series_table(series: &[BattleResult]) -> String {
    let mut out = format!(
        "{:<22} {:>13} {:>11} {:>13} {:>11} {:>7} {:>7}\n",
        "Robot Name", "Total Score", "Survival", "Bullet Damage", "Bullet Bonus", "WINS", "Ratio"
    );
    for r in series {
        let (a, b) = (&r.board.entries[0], &r.board.entries[1]);
        let ratio = relative_total(a.total_score, b.total_score)
            .map_or_else(|_| "-".to_string(), |v| format!("{v:.2}"));
        let _ = writeln!(
            out,
            "{:<22} {:>6.0} {:>6.0} {:>5.0} {:>5.0} {:>6.0} {:>6.0} {:>5.0} {:>5.0} {:>3} {:>3} {:>7}",
            format!("{} vs {}", a.name, b.name),
            a.total_score,
            b.total_score,
            a.survival_score,
            b.survival_score,
            a.bullet_damage,
            b.bullet_damage,
            a.bullet_bonus,
            b.bullet_bonus,
            a.wins,
            b.wins,
            ratio
        );
    }
    out
}

pub fn series_csv(series: &[BattleResult]) -> String {
    let mut out = format!("{SERIES_CSV_HEADER}\n");
    for r in series {
        let (a, b) = (&r.board.entries[0], &r.board.entries[1]);
        let ratio = relative_total(a.total_score, b.total_score)
            .map_or_else(|_| String::new(), |v| format!("{v:?}"));
        let _ = writeln!(
            out,
            "{},{},{:?},{:?},{:?},{:?},{:?},{:?},{:?},{:?},{},{},{}",
            a.name,
            b.name,
            a.total_score,
            b.total_score,
            a.survival_score,
            b.survival_score,
            a.bullet_damage,
            b.bullet_damage,
            a.bullet_bonus,
            b.bullet_bonus,
            a.wins,
            b.wins,
            ratio
        );
    }
    out
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub const MANIFEST_FILE: &str = "manifest.txt";

/// Everything needed to repeat a run, plus the hashes of what it wrote.
#[derive(Debug, Clone, PartialEq)]
pub struct Manifest {
    pub mode: String,
    /// Empty for the default duel series.
    pub bots: Vec<String>,
    pub config: BattleConfig,
    pub artifacts: Vec<(String, String)>,
}

impl Manifest {
    pub fn to_text(&self) -> String {
        let mut out = String::from("# gamecircle run manifest\n");
        let _ = writeln!(out, "mode = {}", self.mode);
        let _ = writeln!(out, "bots = {}", self.bots.join(","));
        out.push_str(&write_config(&self.config));
        for (file, hash) in &self.artifacts {
            let _ = writeln!(out, "sha256.{file} = {hash}");
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, SettingsError> {
        let mut mode = None;
        let mut bots = Vec::new();
        let mut config = BattleConfig::default();
        let mut artifacts = Vec::new();
        for (line, key, value) in parse_pairs(text)? {
            match key.as_str() {
                "mode" => mode = Some(value),
                "bots" => {
                    bots = value
                        .split(',')
                        .map(str::trim)
                        .filter(|s| !s.is_empty())
                        .map(String::from)
                        .collect()
                }
                k => {
                    if let Some(file) = k.strip_prefix("sha256.") {
                        artifacts.push((file.to_string(), value));
                    } else if !apply(&mut config, line, k, &value)? {
                        return Err(SettingsError::UnknownKey { line, key });
                    }
                }
            }
        }
        let mode = mode.ok_or_else(|| SettingsError::Invalid("manifest has no mode".into()))?;
        config
            .validate()
            .map_err(|e| SettingsError::Invalid(e.to_string()))?;
        Ok(Manifest {
            mode,
            bots,
            config,
            artifacts,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use gamecircle_core::bots::BotKind;
    use gamecircle_core::engine::run_battle;

    fn small() -> BattleResult {
        let cfg = BattleConfig {
            rounds: 2,
            ..BattleConfig::default()
        };
        run_battle(&cfg, &[BotKind::TestRobot, BotKind::Fire]).unwrap()
    }

    #[test]
    fn ordinals() {
        let s: Vec<String> = [1, 2, 3, 4, 11, 12, 13, 21, 22].map(ordinal).to_vec();
        assert_eq!(s, ["1st", "2nd", "3rd", "4th", "11th", "12th", "13th", "21st", "22nd"]);
    }

    #[test]
    fn csv_has_one_row_per_bot() {
        let r = small();
        let csv = scores_csv(&r);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], SCORES_CSV_HEADER);
        assert_eq!(lines.len(), 3);
        let cols = SCORES_CSV_HEADER.split(',').count();
        assert!(lines.iter().all(|l| l.split(',').count() == cols));
    }

    #[test]
    fn plot_rows_are_triples() {
        let r = small();
        let data = plot_data([("", &r)], &DUEL_METRICS);
        assert_eq!(data.lines().count(), 1 + 2 * DUEL_METRICS.len());
        assert!(data.lines().all(|l| l.split(',').count() == 3));
    }

    #[test]
    fn event_log_parses_back() {
        let r = small();
        let log = events_log(&r);
        let parsed: Vec<gamecircle_core::engine::BattleEvent> =
            log.lines().map(|l| l.parse().unwrap()).collect();
        let original: Vec<_> = r.events().cloned().collect();
        assert_eq!(parsed, original);
    }

    #[test]
    fn manifest_round_trips() {
        let m = Manifest {
            mode: "duel".into(),
            bots: vec!["TestRobot".into(), "Crazy".into()],
            config: BattleConfig {
                seed: 8,
                ..BattleConfig::default()
            },
            artifacts: vec![("events.log".into(), sha256_hex(b"abc"))],
        };
        assert_eq!(Manifest::parse(&m.to_text()).unwrap(), m);
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
