use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn gamecircle(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gamecircle"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

#[test]
fn unknown_bot_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = gamecircle(&["--bots", "TestRobot,Foo"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Foo"));
}

#[test]
fn roster_sizes_are_checked() {
    let dir = tempfile::tempdir().unwrap();
    let melee = gamecircle(&["--mode", "melee", "--bots", "TestRobot,Crazy"], dir.path());
    assert_eq!(melee.status.code(), Some(2));
    let duel = gamecircle(&["--bots", "TestRobot,Crazy,Fire"], dir.path());
    assert_eq!(duel.status.code(), Some(2));
    let mode = gamecircle(&["--mode", "tourney"], dir.path());
    assert_eq!(mode.status.code(), Some(2));
}

#[test]
fn bad_settings_and_tables_use_their_own_codes() {
    let dir = tempfile::tempdir().unwrap();
    let missing = gamecircle(&["--config", "/nonexistent/settings.txt"], dir.path());
    assert_eq!(missing.status.code(), Some(3));

    let tables = dir.path().join("tables.txt");
    fs::write(&tables, "rounds 30\nduel Crazy 1 2\n").unwrap();
    let corrupt = gamecircle(
        &["--mode", "verify-tables", "--tables", tables.to_str().unwrap()],
        dir.path(),
    );
    assert_eq!(corrupt.status.code(), Some(4));

    let shipped = include_str!("../data/reference_tables.txt");
    fs::write(&tables, shipped.replace("ratio Walls    17.15", "ratio Walls    18.15")).unwrap();
    let wrong = gamecircle(
        &["--mode", "verify-tables", "--tables", tables.to_str().unwrap()],
        dir.path(),
    );
    assert_eq!(wrong.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&wrong.stdout).contains("1 failed"));
}

#[test]
fn fixtures_and_tables_pass() {
    let dir = tempfile::tempdir().unwrap();
    let fixtures = gamecircle(&["--mode", "fixtures"], dir.path());
    assert!(fixtures.status.success());
    let text = String::from_utf8_lossy(&fixtures.stdout);
    assert!(text.starts_with("main=30 ascending=100 descending=100 single_branch_max=160\n"));

    let tables = gamecircle(&["--mode", "verify-tables"], dir.path());
    assert!(tables.status.success());
    assert!(String::from_utf8_lossy(&tables.stdout).contains("0 failed"));
}

#[test]
fn duel_writes_its_files_and_self_play_wins_add_up() {
    let dir = tempfile::tempdir().unwrap();
    let out = gamecircle(&["--bots", "SpinBot,SpinBot", "--rounds", "5", "--seed", "3"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for file in ["scores.txt", "scores.csv", "events.log", "hist.csv", "manifest.txt"] {
        assert!(dir.path().join(file).is_file(), "{file} missing");
    }
    let csv = fs::read_to_string(dir.path().join("scores.csv")).unwrap();
    let wins: u32 = csv
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap().parse::<u32>().unwrap())
        .sum();
    assert_eq!(wins, 5);
}

#[test]
fn melee_writes_radar_data() {
    let dir = tempfile::tempdir().unwrap();
    let out = gamecircle(&["--mode", "melee", "--rounds", "2"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let radar = fs::read_to_string(dir.path().join("radar.csv")).unwrap();
    assert_eq!(radar.lines().next(), Some("category,bot,value"));
    assert_eq!(radar.lines().count(), 1 + 7 * 7);
    let scores = fs::read_to_string(dir.path().join("scores.txt")).unwrap();
    assert_eq!(scores.lines().count(), 8);
}

#[test]
fn settings_file_and_flags_combine() {
    let dir = tempfile::tempdir().unwrap();
    let settings = dir.path().join("settings.txt");
    fs::write(&settings, "rounds = 9\nseed = 4\nmax_ticks = 300\n").unwrap();
    let run = dir.path().join("run");
    let out = gamecircle(
        &["--bots", "Fire,Walls", "--rounds", "2", "--config", settings.to_str().unwrap()],
        &run,
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let manifest = fs::read_to_string(run.join("manifest.txt")).unwrap();
    assert!(manifest.contains("rounds = 2\n"));
    assert!(manifest.contains("seed = 4\n"));
    assert!(manifest.contains("max_ticks = 300\n"));
}

#[test]
fn manifest_reruns_reproduce_every_artifact() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first");
    let out = gamecircle(&["--bots", "TestRobot,V-Robot", "--rounds", "3", "--seed", "21"], &first);
    assert!(out.status.success());
    let manifest = first.join("manifest.txt");
    let second = dir.path().join("second");
    let rerun = gamecircle(&["--manifest", manifest.to_str().unwrap(), "--jobs", "3"], &second);
    assert!(rerun.status.success(), "{}", String::from_utf8_lossy(&rerun.stderr));
    assert!(String::from_utf8_lossy(&rerun.stdout).contains("reproduced 4 artifacts"));

    let tampered = fs::read_to_string(&manifest)
        .unwrap()
        .replace("seed = 21", "seed = 22");
    fs::write(&manifest, tampered).unwrap();
    let third = dir.path().join("third");
    let mismatch = gamecircle(&["--manifest", manifest.to_str().unwrap()], &third);
    assert_eq!(mismatch.status.code(), Some(1));
}

#[test]
fn output_directory_comes_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("from-env");
    let out = Command::new(env!("CARGO_BIN_EXE_gamecircle"))
        .args(["--bots", "Fire,Crazy", "--rounds", "1"])
        .env("GAMECIRCLE_OUT", &target)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(target.join("events.log").is_file());
}
