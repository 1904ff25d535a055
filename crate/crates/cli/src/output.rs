//! Byte-stable CSV rendering of match results.
//!
//! Raw files carry one row per (run, step) with both seats' actions
//! (0 = defect, 1 = cooperate) and rewards. Aggregate files carry the
//! cross-run mean and population standard deviation of one cumulative
//! metric on a step grid. All numbers are plain decimal (floats via
//! the shortest round-trip form), every line ends in `\n`, and the
//! bytes depend only on the results, so re-running a seeded match
//! reproduces the files exactly.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use uml_core::arena::{aggregate_runs, sample_grid, AggregatePoint, Metric, Seat, TimeSeries};

/// Renders the raw per-step table for all runs.
pub fn raw_csv(series: &[TimeSeries]) -> String {
    let mut text = String::from("run,t,action_row,action_col,reward_row,reward_col\n");
    for (run, s) in series.iter().enumerate() {
        for (idx, record) in s.steps().iter().enumerate() {
            text.push_str(&format!(
                "{},{},{},{},{},{}\n",
                run + 1,
                idx + 1,
                record.joint.row.index(),
                record.joint.col.index(),
                record.reward_row,
                record.reward_col,
            ));
        }
    }
    text
}

/// Renders one aggregate table.
pub fn aggregate_csv(points: &[AggregatePoint]) -> String {
    let mut text = String::from("t,metric_mean,metric_std\n");
    for p in points {
        text.push_str(&format!("{},{},{}\n", p.step, p.mean, p.std));
    }
    text
}

/// The file set one match emits: the raw table plus one aggregate per
/// (metric, seat) pair, named `<stem>_<suffix>.csv`.
pub const AGGREGATES: [(&str, Metric, Seat); 4] = [
    ("cooperation_row", Metric::CooperationRate, Seat::Row),
    ("cooperation_col", Metric::CooperationRate, Seat::Col),
    ("reward_row", Metric::AverageReward, Seat::Row),
    ("reward_col", Metric::AverageReward, Seat::Col),
];

/// Writes the full file set for one match into `dir`, creating it if
/// needed, and returns the paths written.
pub fn write_match_files(
    dir: &Path,
    stem: &str,
    steps: u64,
    series: &[TimeSeries],
) -> io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let raw_path = dir.join(format!("{stem}_raw.csv"));
    fs::write(&raw_path, raw_csv(series))?;
    written.push(raw_path);
    let grid = sample_grid(steps);
    for (suffix, metric, seat) in AGGREGATES {
        let points = aggregate_runs(series, metric, seat, &grid);
        let path = dir.join(format!("{stem}_{suffix}.csv"));
        fs::write(&path, aggregate_csv(&points))?;
        written.push(path);
    }
    Ok(written)
}
