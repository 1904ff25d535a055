//! `uml-arena`: seeded tournament runs for the matrix-game engine.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use uml_arena::commands::{
    cmd_list_games, cmd_list_opponents, cmd_run, cmd_selftest, cmd_sweep, CliFailure, Overrides,
};

#[derive(Parser)]
#[command(
    name = "uml-arena",
    version,
    about = "Runs repeated 2x2 matrix-game matches between learning agents and scripted opponents"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct OverrideArgs {
    /// Master seed override
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory override
    #[arg(long)]
    out: Option<String>,
    /// Run count override
    #[arg(long)]
    runs: Option<u32>,
    /// Step count override
    #[arg(long)]
    steps: Option<u64>,
}

impl OverrideArgs {
    fn into_overrides(self) -> Overrides {
        Overrides {
            seed: self.seed,
            out: self.out,
            runs: self.runs,
            steps: self.steps,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run one match from a key=value config file and write CSV series
    Run {
        /// Path to the config document
        config: PathBuf,
        #[command(flatten)]
        overrides: OverrideArgs,
    },
    /// Run every .cfg file in a directory, in parallel
    Sweep {
        /// Directory holding .cfg documents
        dir: PathBuf,
        #[command(flatten)]
        overrides: OverrideArgs,
    },
    /// Print the builtin game identifiers
    ListGames,
    /// Print the scripted opponent identifiers
    ListOpponents,
    /// Run the behavioral contract suite and print one verdict per check
    Selftest,
}

fn configure_threads() -> Result<(), CliFailure> {
    let Ok(raw) = std::env::var("UML_ARENA_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw.parse().map_err(|_| {
        CliFailure::Config(format!(
            "UML_ARENA_THREADS: expected a positive integer, got `{raw}`"
        ))
    })?;
    if threads == 0 {
        return Err(CliFailure::Config(
            "UML_ARENA_THREADS: expected a positive integer, got `0`".to_string(),
        ));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliFailure::Runtime(format!("thread pool: {e}")))
}

fn dispatch(cli: Cli) -> Result<(), CliFailure> {
    configure_threads()?;
    match cli.command {
        Command::Run { config, overrides } => cmd_run(&config, &overrides.into_overrides()),
        Command::Sweep { dir, overrides } => cmd_sweep(&dir, &overrides.into_overrides()),
        Command::ListGames => {
            cmd_list_games();
            Ok(())
        }
        Command::ListOpponents => {
            cmd_list_opponents();
            Ok(())
        }
        Command::Selftest => cmd_selftest(),
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(failure.code() as u8)
        }
    }
}
