//! Command dispatch, output files and exit codes.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use gamecircle_core::bots::BotKind;
use gamecircle_core::engine::{BattleConfig, BattleResult, EngineError};
use gamecircle_core::gametree::{alphabeta_value, build_fixture, minimax_value, FIXTURE_NAMES};

use crate::report::{
    events_log, plot_data, scores_csv, scores_table, series_csv, series_table, sha256_hex,
    Manifest, DUEL_METRICS, MANIFEST_FILE, MELEE_METRICS,
};
use crate::runner::run_battle;
use crate::settings::SettingsError;
use crate::tables::{verify, ReferenceTables, TableError, REFERENCE_TABLES};

/// Root values the shipped trees must back up to.
pub const FIXTURE_EXPECTED: [(&str, f64); 4] = [
    ("main", 30.0),
    ("ascending", 100.0),
    ("descending", 100.0),
    ("single_branch_max", 160.0),
];

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Data(String),
    /// A recomputed value disagreed with an expected one.
    #[error("{0}")]
    Check(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Check(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Io { .. } => 3,
            CliError::Data(_) => 4,
        }
    }
}

impl From<EngineError> for CliError {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::Config(_) | EngineError::RosterTooSmall(_) | EngineError::ArenaTooSmall { .. } => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<TableError> for CliError {
    fn from(e: TableError) -> Self {
        CliError::Data(format!("reference tables: {e}"))
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Duel,
    Melee,
    Fixtures,
    VerifyTables,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Duel => "duel",
            Mode::Melee => "melee",
            Mode::Fixtures => "fixtures",
            Mode::VerifyTables => "verify-tables",
        }
    }

    pub fn from_name(s: &str) -> Option<Mode> {
        [Mode::Duel, Mode::Melee, Mode::Fixtures, Mode::VerifyTables]
            .into_iter()
            .find(|m| m.name() == s)
    }
}

#[derive(Debug, Clone)]
pub struct RunSpec {
    pub mode: Mode,
    /// Empty selects the mode's default roster.
    pub bots: Vec<String>,
    pub config: BattleConfig,
    pub out_dir: PathBuf,
    pub jobs: usize,
    pub tables: Option<PathBuf>,
}

pub fn parse_roster(names: &[String]) -> Result<Vec<BotKind>, CliError> {
    names
        .iter()
        .map(|n| {
            BotKind::from_name(n).ok_or_else(|| {
                CliError::Usage(format!("unknown bot {n:?}; valid bots: {}", BotKind::valid_names()))
            })
        })
        .collect()
}

/// Runs one command, writing human-readable output to `out`.
pub fn execute(spec: &RunSpec, out: &mut dyn Write) -> Result<(), CliError> {
    let roster = parse_roster(&spec.bots)?;
    match spec.mode {
        Mode::Fixtures => fixtures(out),
        Mode::VerifyTables => verify_tables(spec.tables.as_deref(), out),
        Mode::Duel => {
            let files = if roster.is_empty() {
                duel_series(spec)?
            } else if roster.len() == 2 {
                let result = run_battle(&spec.config, &roster, spec.jobs)?;
                say(out, &series_table(std::slice::from_ref(&result)))?;
                battle_files(&result, "hist.csv", plot_data([("", &result)], &DUEL_METRICS))
            } else {
                return Err(CliError::Usage(format!(
                    "duel needs exactly 2 bots, got {}",
                    roster.len()
                )));
            };
            write_run(spec, &roster, files, out)
        }
        Mode::Melee => {
            let roster = if roster.is_empty() {
                BotKind::ALL.to_vec()
            } else {
                roster
            };
            if roster.len() < 3 {
                return Err(CliError::Usage(format!(
                    "melee needs at least 3 bots, got {}",
                    roster.len()
                )));
            }
            let result = run_battle(&spec.config, &roster, spec.jobs)?;
            say(out, &scores_table(&result))?;
            let files = battle_files(&result, "radar.csv", plot_data([("", &result)], &MELEE_METRICS));
            write_run(spec, &roster, files, out)
        }
    }
}

fn say(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes()).map_err(io_err(Path::new("<stdout>")))
}

type Files = Vec<(&'static str, String)>;

fn battle_files(result: &BattleResult, plot_name: &'static str, plot: String) -> Files {
    vec![
        ("scores.txt", scores_table(result)),
        ("scores.csv", scores_csv(result)),
        ("events.log", events_log(result)),
        (plot_name, plot),
    ]
}

/// TestRobot against each baseline in turn.
fn duel_series(spec: &RunSpec) -> Result<Files, CliError> {
    let series = BotKind::BASELINES
        .iter()
        .map(|&b| run_battle(&spec.config, &[BotKind::TestRobot, b], spec.jobs))
        .collect::<Result<Vec<_>, _>>()?;
    let mut log = String::new();
    for r in &series {
        log.push_str(&format!("# {} vs {}\n", r.names[0], r.names[1]));
        log.push_str(&events_log(r));
    }
    let labels: Vec<String> = series.iter().map(|r| format!("vs {}", r.names[1])).collect();
    let plot = plot_data(
        labels.iter().map(String::as_str).zip(series.iter()),
        &DUEL_METRICS,
    );
    Ok(vec![
        ("scores.txt", series_table(&series)),
        ("scores.csv", series_csv(&series)),
        ("events.log", log),
        ("hist.csv", plot),
    ])
}

fn write_run(spec: &RunSpec, roster: &[BotKind], files: Files, out: &mut dyn Write) -> Result<(), CliError> {
    if spec.mode == Mode::Duel && roster.is_empty() {
        say(out, &files[0].1)?;
    }
    let artifacts = write_files(&spec.out_dir, &files)?;
    let manifest = Manifest {
        mode: spec.mode.name().to_string(),
        bots: roster.iter().map(|k| k.name().to_string()).collect(),
        config: spec.config,
        artifacts,
    };
    let path = spec.out_dir.join(MANIFEST_FILE);
    fs::write(&path, manifest.to_text()).map_err(io_err(&path))?;
    say(out, &format!("wrote {}\n", spec.out_dir.display()))
}

/// Writes every file and returns `(name, sha256)` pairs.
pub fn write_files(dir: &Path, files: &[(&str, String)]) -> Result<Vec<(String, String)>, CliError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    files
        .iter()
        .map(|(name, text)| {
            let path = dir.join(name);
            fs::write(&path, text).map_err(io_err(&path))?;
            Ok((name.to_string(), sha256_hex(text.as_bytes())))
        })
        .collect()
}

/// Repeats the run a manifest describes into `out_dir` and compares hashes.
pub fn replay(manifest_path: &Path, out_dir: &Path, jobs: usize, out: &mut dyn Write) -> Result<(), CliError> {
    let text = fs::read_to_string(manifest_path).map_err(io_err(manifest_path))?;
    let manifest = Manifest::parse(&text)
        .map_err(|e: SettingsError| CliError::Data(format!("{}: {e}", manifest_path.display())))?;
    let mode = Mode::from_name(&manifest.mode)
        .ok_or_else(|| CliError::Data(format!("manifest names unknown mode {:?}", manifest.mode)))?;
    let spec = RunSpec {
        mode,
        bots: manifest.bots.clone(),
        config: manifest.config,
        out_dir: out_dir.to_path_buf(),
        jobs,
        tables: None,
    };
    execute(&spec, &mut std::io::sink())?;
    let mut mismatched = Vec::new();
    for (file, expected) in &manifest.artifacts {
        let path = out_dir.join(file);
        let bytes = fs::read(&path).map_err(io_err(&path))?;
        if &sha256_hex(&bytes) != expected {
            mismatched.push(file.clone());
        }
    }
    if mismatched.is_empty() {
        say(out, &format!("reproduced {} artifacts\n", manifest.artifacts.len()))
    } else {
        Err(CliError::Check(format!("artifacts differ: {}", mismatched.join(", "))))
    }
}

fn fixtures(out: &mut dyn Write) -> Result<(), CliError> {
    let mut summary = Vec::new();
    let mut details = String::new();
    let mut failures = Vec::new();
    debug_assert_eq!(FIXTURE_NAMES.len(), FIXTURE_EXPECTED.len());
    for (name, expected) in FIXTURE_EXPECTED {
        let tree = build_fixture(name).map_err(|e| CliError::Data(format!("{name}: {e}")))?;
        let full = minimax_value(&tree);
        let ab = alphabeta_value(&tree);
        summary.push(format!("{name}={}", ab.value));
        details.push_str(&format!(
            "  {name}: minimax {} visited {}; alpha-beta {} visited {} pruned {}\n",
            full.value, full.visited, ab.value, ab.visited, ab.pruned
        ));
        if ab.value != expected || full.value != expected {
            failures.push(format!("{name} expected {expected}, got {}", ab.value));
        }
    }
    say(out, &format!("{}\n{details}", summary.join(" ")))?;
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Check(failures.join("; ")))
    }
}

fn verify_tables(path: Option<&Path>, out: &mut dyn Write) -> Result<(), CliError> {
    let text = match path {
        Some(p) => fs::read_to_string(p).map_err(io_err(p))?,
        None => REFERENCE_TABLES.to_string(),
    };
    let tables = ReferenceTables::parse(&text)?;
    let checks = verify(&tables)?;
    let mut report = String::new();
    for c in &checks {
        report.push_str(&format!("{c}\n"));
    }
    let failed = checks.iter().filter(|c| !c.passed()).count();
    report.push_str(&format!("{} checks, {failed} failed\n", checks.len()));
    say(out, &report)?;
    if failed == 0 {
        Ok(())
    } else {
        Err(CliError::Check(format!("{failed} table checks failed")))
    }
}
