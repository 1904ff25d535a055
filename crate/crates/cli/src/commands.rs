//! Subcommand drivers and their process exit codes.
//!
//! Failures are split by who must act: configuration problems (bad
//! documents, missing files, unresolved identifiers) exit 1, runtime
//! problems (match execution, output I/O) exit 2, and a selftest with
//! at least one failed gating check exits 3.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use thiserror::Error;
use uml_core::acceptance;
use uml_core::arena::{aggregate_runs, run_match, sample_grid, Metric, Seat};
use uml_core::game::BUILTIN_GAMES;

use crate::config::{parse_config, RunConfig, SeatId};
use crate::output::write_match_files;

#[derive(Debug, Error)]
pub enum CliFailure {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Runtime(String),
    #[error("selftest failed: {0} gating check(s) did not pass")]
    Selftest(usize),
}

impl CliFailure {
    /// Process exit code for this failure.
    pub fn code(&self) -> i32 {
        match self {
            CliFailure::Config(_) => 1,
            CliFailure::Runtime(_) => 2,
            CliFailure::Selftest(_) => 3,
        }
    }
}

/// Command-line overrides applied on top of a parsed document.
#[derive(Clone, Default, Debug)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub out: Option<String>,
    pub runs: Option<u32>,
    pub steps: Option<u64>,
}

impl Overrides {
    fn apply(&self, config: &mut RunConfig) {
        if let Some(seed) = self.seed {
            config.seed = seed;
        }
        if let Some(out) = &self.out {
            config.out = out.clone();
        }
        if let Some(runs) = self.runs {
            config.runs = runs;
        }
        if let Some(steps) = self.steps {
            config.steps = steps;
        }
    }
}

fn config_stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "match".to_string())
}

fn load(path: &Path, overrides: &Overrides) -> Result<RunConfig, CliFailure> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliFailure::Config(format!("{}: {e}", path.display())))?;
    let mut config =
        parse_config(&text).map_err(|e| CliFailure::Config(format!("{}: {e}", path.display())))?;
    overrides.apply(&mut config);
    Ok(config)
}

/// Executes one parsed config and returns its printable summary.
fn execute(stem: &str, config: &RunConfig) -> Result<String, CliFailure> {
    let match_config = config
        .to_match()
        .map_err(|e| CliFailure::Config(format!("{stem}: {e}")))?;
    let series =
        run_match(&match_config).map_err(|e| CliFailure::Runtime(format!("{stem}: {e}")))?;
    let out_dir = PathBuf::from(&config.out);
    let written = write_match_files(&out_dir, stem, config.steps, &series)
        .map_err(|e| CliFailure::Runtime(format!("{stem}: writing {}: {e}", out_dir.display())))?;

    let grid = sample_grid(config.steps);
    let last = *grid.last().expect("grid is never empty");
    let mut summary = format!(
        "{stem}: {} on {}, {} run(s) x {} steps, seed {}\n",
        describe_seats(config),
        config.game.name(),
        config.runs,
        config.steps,
        config.seed
    );
    for seat in [Seat::Row, Seat::Col] {
        let coop = aggregate_runs(&series, Metric::CooperationRate, seat, &[last])[0];
        let reward = aggregate_runs(&series, Metric::AverageReward, seat, &[last])[0];
        let _ = writeln!(
            summary,
            "  {} at t={last}: cooperation {:.3} (std {:.3}), avg reward {:.3} (std {:.3})",
            seat_name(seat),
            coop.mean,
            coop.std,
            reward.mean,
            reward.std
        );
    }
    let _ = writeln!(
        summary,
        "  wrote {} files under {}",
        written.len(),
        out_dir.display()
    );
    Ok(summary)
}

fn seat_name(seat: Seat) -> &'static str {
    match seat {
        Seat::Row => "row",
        Seat::Col => "col",
    }
}

fn describe_seats(config: &RunConfig) -> String {
    format!("{} vs {}", config.row, config.col)
}

/// `run <config>`: one match, CSV files, summary on stdout.
pub fn cmd_run(path: &Path, overrides: &Overrides) -> Result<(), CliFailure> {
    let config = load(path, overrides)?;
    let summary = execute(&config_stem(path), &config)?;
    print!("{summary}");
    Ok(())
}

/// `sweep <dir>`: every `.cfg` in the directory, in parallel. All
/// documents are parsed before anything runs, so a typo in one config
/// aborts the sweep instead of wasting the batch.
pub fn cmd_sweep(dir: &Path, overrides: &Overrides) -> Result<(), CliFailure> {
    let entries =
        fs::read_dir(dir).map_err(|e| CliFailure::Config(format!("{}: {e}", dir.display())))?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "cfg"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(CliFailure::Config(format!(
            "{}: no .cfg files to sweep",
            dir.display()
        )));
    }
    let configs: Vec<(String, RunConfig)> = paths
        .iter()
        .map(|p| load(p, overrides).map(|c| (config_stem(p), c)))
        .collect::<Result<_, _>>()?;

    let results: Vec<Result<String, CliFailure>> = configs
        .par_iter()
        .map(|(stem, config)| execute(stem, config))
        .collect();
    let mut failures = Vec::new();
    for result in results {
        match result {
            Ok(summary) => print!("{summary}"),
            Err(failure) => failures.push(failure.to_string()),
        }
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliFailure::Runtime(failures.join("; ")))
    }
}

/// `list-games`: builtin identifiers, one per line.
pub fn cmd_list_games() {
    for name in BUILTIN_GAMES {
        println!("{name}");
    }
}

/// `list-opponents`: scripted seat identifiers, one per line.
pub fn cmd_list_opponents() {
    for id in SeatId::IDENTIFIERS {
        if id != "aixi" && id != "foe" {
            println!("{id}");
        }
    }
}

/// `selftest`: the full behavioral contract suite, one verdict line
/// per check; fails the process only on gating checks.
pub fn cmd_selftest() -> Result<(), CliFailure> {
    let reports = acceptance::run_all();
    let mut failed = 0;
    for report in &reports {
        println!("{}", report.line());
        if report.gating && !report.passed {
            failed += 1;
        }
    }
    if failed == 0 {
        Ok(())
    } else {
        Err(CliFailure::Selftest(failed))
    }
}
