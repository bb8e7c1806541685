use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use gamecircle::app::{execute, replay, CliError, Mode, RunSpec};
use gamecircle::settings::parse_config;
use gamecircle_core::engine::BattleConfig;

/// Tank battles, search fixtures and score-table checks.
#[derive(Debug, Parser)]
#[command(name = "gamecircle", version)]
struct Args {
    /// duel, melee, fixtures or verify-tables.
    #[arg(long, default_value = "duel")]
    mode: String,
    /// Comma-separated roster. Duel defaults to TestRobot against every
    /// baseline; melee defaults to all seven bots.
    #[arg(long, value_delimiter = ',')]
    bots: Vec<String>,
    #[arg(long)]
    rounds: Option<u32>,
    #[arg(long)]
    seed: Option<u64>,
    /// Settings file of `key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, env = "GAMECIRCLE_OUT", default_value = "gamecircle-out")]
    out: PathBuf,
    /// Worker threads for battle rounds.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Repeat the run recorded in this manifest and compare output hashes.
    #[arg(long)]
    manifest: Option<PathBuf>,
    /// Score tables to check instead of the built-in ones.
    #[arg(long)]
    tables: Option<PathBuf>,
}

fn run(args: Args) -> Result<(), CliError> {
    let mut stdout = std::io::stdout().lock();
    if let Some(manifest) = &args.manifest {
        return replay(manifest, &args.out, args.jobs.max(1), &mut stdout);
    }
    let mode = Mode::from_name(&args.mode)
        .ok_or_else(|| CliError::Usage(format!("unknown mode {:?}", args.mode)))?;
    let mut config = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
            parse_config(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
        }
        None => BattleConfig::default(),
    };
    if let Some(r) = args.rounds {
        config.rounds = r;
    }
    if let Some(s) = args.seed {
        config.seed = s;
    }
    config.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let spec = RunSpec {
        mode,
        bots: args.bots.into_iter().filter(|b| !b.trim().is_empty()).collect(),
        config,
        out_dir: args.out,
        jobs: args.jobs.max(1),
        tables: args.tables,
    };
    execute(&spec, &mut stdout)
}

fn main() -> ExitCode {
    match run(Args::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("gamecircle: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
