//! CSV rendering and match file layout.

use std::fs;
use std::path::PathBuf;

use uml_arena::output::{aggregate_csv, raw_csv, write_match_files, AGGREGATES};
use uml_core::arena::{aggregate_runs, run_match, sample_grid, MatchConfig, PlayerSpec};
use uml_core::foe::FoeConfig;
use uml_core::game::MatrixGame;
use uml_core::opponents::OpponentSpec;

fn scripted_match(steps: u64, runs: u32, seed: u64) -> MatchConfig {
    MatchConfig {
        game: MatrixGame::builtin("chicken").unwrap(),
        row: PlayerSpec::Scripted(OpponentSpec::tit_for_tat(1).unwrap()),
        col: PlayerSpec::Scripted(OpponentSpec::Alternating {
            start: uml_core::game::Action::Defect,
        }),
        steps,
        runs,
        master_seed: seed,
    }
}

fn temp_dir(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    if dir.exists() {
        fs::remove_dir_all(&dir).unwrap();
    }
    dir
}

#[test]
fn raw_csv_lists_every_run_and_step_once() {
    let series = run_match(&scripted_match(2, 1, 7)).unwrap();
    let text = raw_csv(&series);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "run,t,action_row,action_col,reward_row,reward_col"
    );
    assert_eq!(lines.len(), 3);
    // tft1 opens cooperating while alt0 opens defecting: the swerver
    // takes 1 and the defector 4; then both flip and the payoffs swap
    assert_eq!(lines[1], "1,1,1,0,1,4");
    assert_eq!(lines[2], "1,2,0,1,4,1");
}

#[test]
fn aggregate_csv_covers_the_whole_grid() {
    let series = run_match(&scripted_match(500, 3, 11)).unwrap();
    let grid = sample_grid(500);
    assert_eq!(grid.len(), 500);
    let points = aggregate_runs(&series, AGGREGATES[0].1, AGGREGATES[0].2, &grid);
    let text = aggregate_csv(&points);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,metric_mean,metric_std");
    assert_eq!(lines.len(), 501);
    assert!(lines[1].starts_with("1,"), "{}", lines[1]);
    assert!(lines[500].starts_with("500,"), "{}", lines[500]);
}

#[test]
fn data_lines_use_plain_decimal_notation() {
    // a randomizing seat at a long horizon produces tiny means and
    // standard deviations that must still print without an exponent
    let config = MatchConfig {
        game: MatrixGame::builtin("prisoners_dilemma").unwrap(),
        row: PlayerSpec::Foe(FoeConfig::default()),
        col: PlayerSpec::Scripted(OpponentSpec::tit_for_tat(1).unwrap()),
        steps: 2_000,
        runs: 2,
        master_seed: 3,
    };
    let series = run_match(&config).unwrap();
    let grid = sample_grid(config.steps);
    for (_, metric, seat) in AGGREGATES {
        let text = aggregate_csv(&aggregate_runs(&series, metric, seat, &grid));
        for line in text.lines().skip(1) {
            assert!(
                !line.contains('e') && !line.contains('E'),
                "scientific notation leaked: {line}"
            );
        }
    }
}

#[test]
fn csv_files_parse_back_with_a_real_reader() {
    let dir = temp_dir("csv_parse_back");
    let config = scripted_match(40, 2, 5);
    let series = run_match(&config).unwrap();
    let paths = write_match_files(&dir, "probe", config.steps, &series).unwrap();
    assert_eq!(paths.len(), 5);

    let mut raw = csv::Reader::from_path(&paths[0]).unwrap();
    assert_eq!(
        raw.headers().unwrap(),
        &csv::StringRecord::from(vec![
            "run",
            "t",
            "action_row",
            "action_col",
            "reward_row",
            "reward_col"
        ])
    );
    let records: Vec<csv::StringRecord> = raw.records().map(Result::unwrap).collect();
    assert_eq!(records.len(), 80);
    for record in &records {
        for field in record.iter() {
            field.parse::<u64>().expect("raw fields are integers");
        }
    }

    for path in &paths[1..] {
        let mut reader = csv::Reader::from_path(path).unwrap();
        assert_eq!(
            reader.headers().unwrap(),
            &csv::StringRecord::from(vec!["t", "metric_mean", "metric_std"])
        );
        let records: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
        assert_eq!(records.len(), 40);
        for record in &records {
            record[0].parse::<u64>().expect("grid step");
            record[1].parse::<f64>().expect("mean");
            record[2].parse::<f64>().expect("std");
        }
    }
}

#[test]
fn file_names_follow_the_stem_and_suffix_scheme() {
    let dir = temp_dir("file_names");
    let config = scripted_match(3, 1, 0);
    let series = run_match(&config).unwrap();
    let paths = write_match_files(&dir, "duel", config.steps, &series).unwrap();
    let names: Vec<String> = paths
        .iter()
        .map(|p| p.file_name().unwrap().to_string_lossy().into_owned())
        .collect();
    assert_eq!(
        names,
        [
            "duel_raw.csv",
            "duel_cooperation_row.csv",
            "duel_cooperation_col.csv",
            "duel_reward_row.csv",
            "duel_reward_col.csv"
        ]
    );
}

#[test]
fn reruns_with_the_same_seed_are_byte_identical() {
    let dir_a = temp_dir("rerun_a");
    let dir_b = temp_dir("rerun_b");
    let config = MatchConfig {
        game: MatrixGame::builtin("stag_hunt").unwrap(),
        row: PlayerSpec::Foe(FoeConfig::default()),
        col: PlayerSpec::Scripted(OpponentSpec::UniformRandom),
        steps: 300,
        runs: 3,
        master_seed: 42,
    };
    let first = write_match_files(&dir_a, "m", config.steps, &run_match(&config).unwrap()).unwrap();
    let second =
        write_match_files(&dir_b, "m", config.steps, &run_match(&config).unwrap()).unwrap();
    for (a, b) in first.iter().zip(&second) {
        assert_eq!(
            fs::read(a).unwrap(),
            fs::read(b).unwrap(),
            "{} differs between identical runs",
            a.file_name().unwrap().to_string_lossy()
        );
    }
}
