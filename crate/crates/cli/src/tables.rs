//! Reference duel and melee score tables, and the statistics derived from them.

use gamecircle_core::tournament::{
    relative_total, top3_rate, ScoreBoard, ScoreEntry, ScoreError,
};

/// The tables shipped with the crate.
pub const REFERENCE_TABLES: &str = include_str!("../data/reference_tables.txt");

pub const RATIO_TOLERANCE: f64 = 0.005;
pub const SHARE_TOLERANCE: f64 = 0.5;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum TableError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("tables have no {0} rows")]
    Missing(&'static str),
    #[error(transparent)]
    Score(#[from] ScoreError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct DuelRow {
    pub opponent: String,
    /// `[side a, side b]` for every column.
    pub total: [f64; 2],
    pub survival: [f64; 2],
    pub bullet_damage: [f64; 2],
    pub bullet_bonus: [f64; 2],
    pub wins: [u32; 2],
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeleeRow {
    pub rank: u32,
    pub name: String,
    pub total: f64,
    pub stated_share: f64,
    pub survival: f64,
    pub bullet_damage: f64,
    pub bullet_bonus: f64,
    pub places: [u32; 3],
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ReferenceTables {
    pub rounds: u32,
    pub duels: Vec<DuelRow>,
    pub ratios: Vec<(String, f64)>,
    pub melee: Vec<MeleeRow>,
    pub top3: Vec<(String, f64)>,
}

fn numbers<T: std::str::FromStr>(fields: &[&str], line: usize) -> Result<Vec<T>, TableError> {
    fields
        .iter()
        .map(|f| {
            f.parse().map_err(|_| TableError::Parse {
                line,
                message: format!("not a number: {f:?}"),
            })
        })
        .collect()
}

fn arity(fields: &[&str], want: usize, line: usize) -> Result<(), TableError> {
    if fields.len() == want {
        Ok(())
    } else {
        Err(TableError::Parse {
            line,
            message: format!("expected {want} fields, found {}", fields.len()),
        })
    }
}

impl ReferenceTables {
    pub fn parse(text: &str) -> Result<Self, TableError> {
        let mut t = ReferenceTables::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let fields: Vec<&str> = content.split_whitespace().collect();
            match fields[0] {
                "rounds" => {
                    arity(&fields, 2, line)?;
                    t.rounds = numbers(&fields[1..2], line)?[0];
                }
                "duel" => {
                    arity(&fields, 12, line)?;
                    let v: Vec<f64> = numbers(&fields[2..10], line)?;
                    let w: Vec<u32> = numbers(&fields[10..12], line)?;
                    t.duels.push(DuelRow {
                        opponent: fields[1].to_string(),
                        total: [v[0], v[1]],
                        survival: [v[2], v[3]],
                        bullet_damage: [v[4], v[5]],
                        bullet_bonus: [v[6], v[7]],
                        wins: [w[0], w[1]],
                    });
                }
                "ratio" | "top3" => {
                    arity(&fields, 3, line)?;
                    let v: Vec<f64> = numbers(&fields[2..3], line)?;
                    let target = if fields[0] == "ratio" {
                        &mut t.ratios
                    } else {
                        &mut t.top3
                    };
                    target.push((fields[1].to_string(), v[0]));
                }
                "melee" => {
                    arity(&fields, 11, line)?;
                    let rank: Vec<u32> = numbers(&fields[1..2], line)?;
                    let v: Vec<f64> = numbers(&fields[3..8], line)?;
                    let p: Vec<u32> = numbers(&fields[8..11], line)?;
                    t.melee.push(MeleeRow {
                        rank: rank[0],
                        name: fields[2].to_string(),
                        total: v[0],
                        stated_share: v[1],
                        survival: v[2],
                        bullet_damage: v[3],
                        bullet_bonus: v[4],
                        places: [p[0], p[1], p[2]],
                    });
                }
                other => {
                    return Err(TableError::Parse {
                        line,
                        message: format!("unknown record {other:?}"),
                    })
                }
            }
        }
        for (what, empty) in [
            ("rounds", t.rounds == 0),
            ("duel", t.duels.is_empty()),
            ("ratio", t.ratios.is_empty()),
            ("melee", t.melee.is_empty()),
            ("top3", t.top3.is_empty()),
        ] {
            if empty {
                return Err(TableError::Missing(what));
            }
        }
        Ok(t)
    }

    /// The melee table as a score board.
    pub fn melee_board(&self) -> ScoreBoard {
        let entries = self
            .melee
            .iter()
            .map(|r| ScoreEntry {
                name: r.name.clone(),
                total_score: r.total,
                survival_score: r.survival,
                bullet_damage: r.bullet_damage,
                bullet_bonus: r.bullet_bonus,
                firsts: r.places[0],
                seconds: r.places[1],
                thirds: r.places[2],
                wins: r.places[0],
                ..ScoreEntry::default()
            })
            .collect();
        ScoreBoard::from_entries(entries, self.rounds)
    }
}

/// One recomputed statistic next to the value the tables state.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub label: String,
    pub computed: f64,
    pub stated: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        (self.computed - self.stated).abs() <= self.tolerance + 1e-12
    }
}

impl std::fmt::Display for Check {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{:<5} {:<32} computed {:>8.2}  stated {:>8.2}",
            if self.passed() { "ok" } else { "FAIL" },
            self.label,
            self.computed,
            self.stated
        )
    }
}

/// Recomputes the relative totals, melee shares, top-three rate and rank order.
pub fn verify(tables: &ReferenceTables) -> Result<Vec<Check>, TableError> {
    let mut checks = Vec::new();
    for (opponent, stated) in &tables.ratios {
        let row = tables
            .duels
            .iter()
            .find(|d| &d.opponent == opponent)
            .ok_or(TableError::Missing("matching duel"))?;
        checks.push(Check {
            label: format!("TestRobot : {opponent}"),
            computed: relative_total(row.total[0], row.total[1])?,
            stated: *stated,
            tolerance: RATIO_TOLERANCE,
        });
    }

    let board = tables.melee_board();
    let shares = board.score_share()?;
    for (row, share) in tables.melee.iter().zip(&shares) {
        checks.push(Check {
            label: format!("{} share %", row.name),
            computed: *share,
            stated: row.stated_share,
            tolerance: SHARE_TOLERANCE,
        });
    }
    let sum: f64 = shares.iter().sum();
    checks.push(Check {
        label: "share sum %".to_string(),
        computed: sum,
        stated: 100.0,
        tolerance: 1.0,
    });

    let rounds = board.rounds;
    for (name, stated) in &tables.top3 {
        let entry = board
            .entries
            .iter()
            .find(|e| &e.name == name)
            .ok_or(TableError::Missing("matching melee"))?;
        checks.push(Check {
            label: format!("{name} top-3 rate"),
            computed: top3_rate(entry, rounds)?,
            stated: *stated,
            tolerance: 0.0,
        });
    }

    for (place, slot) in board.ranking().into_iter().enumerate() {
        checks.push(Check {
            label: format!("{} rank", board.entries[slot].name),
            computed: (place + 1) as f64,
            stated: f64::from(tables.melee[slot].rank),
            tolerance: 0.0,
        });
    }
    Ok(checks)
}
