//! End-to-end runs of the compiled binary: exit codes, stderr wording,
//! file output and environment handling.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_uml-arena"))
}

fn temp_dir(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    if dir.exists() {
        fs::remove_dir_all(&dir).unwrap();
    }
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn stdout_lines(output: &Output) -> Vec<String> {
    String::from_utf8_lossy(&output.stdout)
        .lines()
        .map(str::to_string)
        .collect()
}

fn stderr_text(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

#[test]
fn list_games_prints_the_stock_names() {
    let output = binary().arg("list-games").output().unwrap();
    assert_eq!(output.status.code(), Some(0));
    assert_eq!(
        stdout_lines(&output),
        [
            "prisoners_dilemma",
            "stag_hunt",
            "chicken",
            "battle_of_sexes",
            "matching_pennies"
        ]
    );
}

#[test]
fn list_opponents_prints_the_scripted_seats() {
    let output = binary().arg("list-opponents").output().unwrap();
    assert_eq!(output.status.code(), Some(0));
    assert_eq!(
        stdout_lines(&output),
        [
            "random",
            "tft1",
            "tft2",
            "tft3",
            "alt0",
            "alt1",
            "stubborn3",
            "stubborn2"
        ]
    );
}

#[test]
fn missing_config_file_is_a_config_error() {
    let output = binary()
        .args(["run", "definitely_missing.cfg"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
    assert!(
        stderr_text(&output).starts_with("error:"),
        "{}",
        stderr_text(&output)
    );
}

#[test]
fn invalid_config_reports_the_offending_line() {
    let dir = temp_dir("invalid_cfg");
    let path = dir.join("bad.cfg");
    fs::write(&path, "game=pong\nrow=aixi\ncol=tft1\n").unwrap();
    let output = binary().arg("run").arg(&path).output().unwrap();
    assert_eq!(output.status.code(), Some(1));
    let stderr = stderr_text(&output);
    assert!(stderr.contains("line 1"), "{stderr}");
    assert!(stderr.contains("pong"), "{stderr}");
}

fn assert_match_files(dir: &Path, stem: &str) {
    for suffix in [
        "raw",
        "cooperation_row",
        "cooperation_col",
        "reward_row",
        "reward_col",
    ] {
        let path = dir.join(format!("{stem}_{suffix}.csv"));
        assert!(path.is_file(), "missing {}", path.display());
        assert!(
            fs::metadata(&path).unwrap().len() > 0,
            "{} is empty",
            path.display()
        );
    }
}

#[test]
fn run_writes_the_full_file_set() {
    let dir = temp_dir("run_files");
    let cfg = dir.join("duel.cfg");
    fs::write(&cfg, "game=chicken\nrow=tft1\ncol=alt0\nsteps=5\n").unwrap();
    let out = dir.join("results");
    let output = binary()
        .arg("run")
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0), "{}", stderr_text(&output));
    assert_match_files(&out, "duel");
    let raw = fs::read_to_string(out.join("duel_raw.csv")).unwrap();
    assert_eq!(raw.lines().count(), 6, "header plus five steps:\n{raw}");
}

#[test]
fn step_and_run_overrides_reach_the_output() {
    let dir = temp_dir("overrides");
    let cfg = dir.join("m.cfg");
    fs::write(
        &cfg,
        "game=stag_hunt\nrow=random\ncol=random\nsteps=50\nruns=2\n",
    )
    .unwrap();
    let out = dir.join("results");
    let output = binary()
        .arg("run")
        .arg(&cfg)
        .args(["--steps", "7", "--runs", "3", "--seed", "9"])
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0), "{}", stderr_text(&output));
    let raw = fs::read_to_string(out.join("m_raw.csv")).unwrap();
    assert_eq!(raw.lines().count(), 1 + 3 * 7, "{raw}");
}

#[test]
fn sweep_runs_every_config_in_the_directory() {
    let dir = temp_dir("sweep_ok");
    fs::write(
        dir.join("a.cfg"),
        "game=chicken\nrow=tft1\ncol=alt0\nsteps=4\n",
    )
    .unwrap();
    fs::write(
        dir.join("b.cfg"),
        "game=prisoners_dilemma\nrow=alt1\ncol=tft2\nsteps=4\n",
    )
    .unwrap();
    fs::write(dir.join("notes.txt"), "not a config\n").unwrap();
    let out = dir.join("results");
    let output = binary()
        .arg("sweep")
        .arg(&dir)
        .arg("--out")
        .arg(&out)
        .env("UML_ARENA_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0), "{}", stderr_text(&output));
    assert_match_files(&out, "a");
    assert_match_files(&out, "b");
}

#[test]
fn sweep_rejects_an_empty_directory() {
    let dir = temp_dir("sweep_empty");
    let output = binary().arg("sweep").arg(&dir).output().unwrap();
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn sweep_fails_fast_when_any_config_is_invalid() {
    let dir = temp_dir("sweep_invalid");
    fs::write(
        dir.join("good.cfg"),
        "game=chicken\nrow=tft1\ncol=alt0\nsteps=4\n",
    )
    .unwrap();
    fs::write(dir.join("bad.cfg"), "game=pong\nrow=aixi\ncol=tft1\n").unwrap();
    let out = dir.join("results");
    let output = binary()
        .arg("sweep")
        .arg(&dir)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
    // fail-fast: nothing may be written when any config is bad
    assert!(!out.exists(), "output was written despite a bad config");
}

#[test]
fn thread_cap_from_the_environment_is_validated() {
    let output = binary()
        .arg("list-games")
        .env("UML_ARENA_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1), "{}", stderr_text(&output));
    let output = binary()
        .arg("list-games")
        .env("UML_ARENA_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1), "{}", stderr_text(&output));
}

#[test]
fn selftest_passes_and_prints_one_verdict_per_check() {
    let output = binary().arg("selftest").output().unwrap();
    assert_eq!(output.status.code(), Some(0), "{}", stderr_text(&output));
    let lines = stdout_lines(&output);
    assert_eq!(lines.len(), 13);
    for line in &lines {
        assert!(
            line.starts_with("PASS")
                || line.starts_with("FAIL")
                || line.starts_with("INFO-PASS")
                || line.starts_with("INFO-FAIL"),
            "unexpected verdict line: {line}"
        );
        assert!(line.contains("criterion"), "{line}");
    }
    // gating checks must all pass for exit code zero
    assert!(
        lines.iter().all(|l| !l.starts_with("FAIL")),
        "gating failure slipped through: {lines:?}"
    );
}
