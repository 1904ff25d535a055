//! Flat `key=value` run configuration.
//!
//! A document is a list of `key=value` lines; blank lines and lines
//! whose first non-space character is `#` are skipped. Every key has a
//! default except `game`, `row` and `col`, so the smallest useful
//! config is three lines. Parsing rejects unknown keys, duplicate
//! keys, malformed lines and out-of-range values, each with the line
//! number where it happened, and finishes by resolving the whole
//! document into an executable match so cross-key problems (a reward
//! outside the planner's loss support, a bad prior vector) also
//! surface at parse time.
//!
//! [`serialize_config`] renders the canonical form: every key in a
//! fixed order, defaults written out. `parse(serialize(c)) == c` for
//! every valid config.

use std::fmt;

use thiserror::Error;
use uml_core::aixi::{AixiConfig, Horizon, MAX_DEPTH};
use uml_core::arena::{MatchConfig, PlayerSpec, Seat};
use uml_core::bayes::LossSupport;
use uml_core::foe::{BlockSchedule, FoeConfig, FoeVariant, Prior, PriorSign, EXPERT_COUNT};
use uml_core::game::{Action, MatrixGame, BUILTIN_GAMES};
use uml_core::opponents::OpponentSpec;

/// Stock planning depth: the top of the default 8..2 cycle.
pub const DEFAULT_DEPTH: u32 = 8;
/// Stock Monte-Carlo sample count for the faster learner's
/// selection-probability estimate.
pub const DEFAULT_MC_SAMPLES: u32 = 1000;
/// Stock output directory.
pub const DEFAULT_OUT: &str = "out";

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: expected key=value, got `{text}`")]
    Malformed { line: usize, text: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: duplicate key `{key}` (first set on line {first})")]
    DuplicateKey {
        line: usize,
        key: String,
        first: usize,
    },
    #[error("line {line}: bad value `{value}` for `{key}`: expected {expected}")]
    BadValue {
        line: usize,
        key: String,
        value: String,
        expected: String,
    },
    #[error("line {line}: key `{key}` {reason}")]
    Inconsistent {
        line: usize,
        key: String,
        reason: String,
    },
    #[error("missing required key `{0}`")]
    Missing(&'static str),
    #[error("{0}")]
    Unresolvable(String),
}

/// Who occupies a seat, by config identifier.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SeatId {
    /// The expectimin planner (`aixi`).
    Planner,
    /// The follow-or-explore bandit (`foe`).
    Bandit,
    /// Fair coin (`random`).
    Random,
    /// `tft1`..`tft3`: copy after that many consecutive cooperations.
    TitForTat(u8),
    /// `alt0`/`alt1`: alternator starting from that action bit.
    Alternating(Action),
    /// `stubborn2`/`stubborn3`: holdout that yields after a run of that
    /// length; its venue depends on the game and seat, see
    /// [`RunConfig::to_match`].
    Stubborn(u8),
}

impl SeatId {
    pub const IDENTIFIERS: [&'static str; 10] = [
        "aixi",
        "foe",
        "random",
        "tft1",
        "tft2",
        "tft3",
        "alt0",
        "alt1",
        "stubborn3",
        "stubborn2",
    ];

    fn parse(token: &str) -> Option<SeatId> {
        Some(match token {
            "aixi" => SeatId::Planner,
            "foe" => SeatId::Bandit,
            "random" => SeatId::Random,
            "tft1" => SeatId::TitForTat(1),
            "tft2" => SeatId::TitForTat(2),
            "tft3" => SeatId::TitForTat(3),
            "alt0" => SeatId::Alternating(Action::Defect),
            "alt1" => SeatId::Alternating(Action::Cooperate),
            "stubborn2" => SeatId::Stubborn(2),
            "stubborn3" => SeatId::Stubborn(3),
            _ => return None,
        })
    }

    fn token(self) -> String {
        match self {
            SeatId::Planner => "aixi".into(),
            SeatId::Bandit => "foe".into(),
            SeatId::Random => "random".into(),
            SeatId::TitForTat(k) => format!("tft{k}"),
            SeatId::Alternating(start) => format!("alt{}", start.index()),
            SeatId::Stubborn(k) => format!("stubborn{k}"),
        }
    }

    /// Whether this seat draws random numbers during a match; decides
    /// the default run count.
    fn randomizes(self) -> bool {
        matches!(self, SeatId::Bandit | SeatId::Random)
    }
}

impl fmt::Display for SeatId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.token())
    }
}

/// Planning-horizon schedule selector for planner seats.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum HorizonVariant {
    /// Depth cycle `depth, depth-1, ..., 2`, repeating.
    Consistent,
    /// Constant depth, replanned every step.
    Moving,
    /// Constant depth; same schedule as `moving`, named for configs
    /// that mean "no horizon trick at all".
    Fixed,
}

impl HorizonVariant {
    fn token(self) -> &'static str {
        match self {
            HorizonVariant::Consistent => "consistent",
            HorizonVariant::Moving => "moving",
            HorizonVariant::Fixed => "fixed",
        }
    }
}

/// Learner variant selector for bandit seats.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FoeVariantId {
    /// Learns only from exploration blocks.
    Basic,
    /// Learns from every block with importance weights from
    /// `mc_samples` Monte-Carlo draws.
    Faster,
}

impl FoeVariantId {
    fn token(self) -> &'static str {
        match self {
            FoeVariantId::Basic => "basic",
            FoeVariantId::Faster => "faster",
        }
    }
}

fn schedule_token(schedule: BlockSchedule) -> &'static str {
    match schedule {
        BlockSchedule::EighthRoot => "root8",
        BlockSchedule::SixteenthRoot => "root16",
        BlockSchedule::Sim024 => "sim024",
    }
}

/// A fully validated run description: the document's fields with every
/// default filled in. [`RunConfig::to_match`] resolves it into the
/// arena's [`MatchConfig`].
#[derive(Clone, PartialEq, Debug)]
pub struct RunConfig {
    pub game: MatrixGame,
    pub row: SeatId,
    pub col: SeatId,
    pub steps: u64,
    pub runs: u32,
    pub seed: u64,
    /// Output directory for CSV files.
    pub out: String,
    pub support: LossSupport,
    pub variant: HorizonVariant,
    pub depth: u32,
    /// Depth override for a planner in the col seat, for breaking the
    /// symmetry of planner-vs-planner matches.
    pub depth_b: Option<u32>,
    pub foe_variant: FoeVariantId,
    pub mc_samples: u32,
    pub block_schedule: BlockSchedule,
    pub prior: Prior,
    pub prior_sign: PriorSign,
}

/// One parsed `key=value` occurrence.
struct Entry {
    line: usize,
    value: String,
    used: bool,
}

struct Document {
    entries: Vec<(String, Entry)>,
}

impl Document {
    fn parse(text: &str) -> Result<Document, ConfigError> {
        let mut entries: Vec<(String, Entry)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let Some((key, value)) = trimmed.split_once('=') else {
                return Err(ConfigError::Malformed {
                    line,
                    text: trimmed.to_string(),
                });
            };
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if let Some((_, first)) = entries.iter().find(|(k, _)| *k == key) {
                return Err(ConfigError::DuplicateKey {
                    line,
                    key,
                    first: first.line,
                });
            }
            entries.push((
                key,
                Entry {
                    line,
                    value,
                    used: false,
                },
            ));
        }
        Ok(Document { entries })
    }

    /// Marks the key used and hands out its line and value.
    fn take(&mut self, key: &str) -> Option<(usize, String)> {
        self.entries
            .iter_mut()
            .find(|(k, _)| k == key)
            .map(|(_, e)| {
                e.used = true;
                (e.line, e.value.clone())
            })
    }

    /// After all known keys were taken, anything untouched is unknown.
    fn reject_unknown(&self) -> Result<(), ConfigError> {
        if let Some((key, entry)) = self.entries.iter().find(|(_, e)| !e.used) {
            return Err(ConfigError::UnknownKey {
                line: entry.line,
                key: key.clone(),
            });
        }
        Ok(())
    }
}

fn bad(line: usize, key: &str, value: &str, expected: impl Into<String>) -> ConfigError {
    ConfigError::BadValue {
        line,
        key: key.to_string(),
        value: value.to_string(),
        expected: expected.into(),
    }
}

fn parse_number<T: std::str::FromStr>(
    line: usize,
    key: &str,
    value: &str,
    expected: &str,
) -> Result<T, ConfigError> {
    value.parse().map_err(|_| bad(line, key, value, expected))
}

/// Parses a `"a,b;c,d"` reward table: rows separated by `;`, entries
/// by `,`, each in 0..=4.
fn parse_rewards(line: usize, key: &str, value: &str) -> Result<[[u8; 2]; 2], ConfigError> {
    let expected = "a,b;c,d with entries in 0..=4";
    let mut rows = [[0u8; 2]; 2];
    let parts: Vec<&str> = value.split(';').collect();
    if parts.len() != 2 {
        return Err(bad(line, key, value, expected));
    }
    for (r, part) in parts.iter().enumerate() {
        let cells: Vec<&str> = part.split(',').collect();
        if cells.len() != 2 {
            return Err(bad(line, key, value, expected));
        }
        for (c, cell) in cells.iter().enumerate() {
            rows[r][c] = parse_number(line, key, cell.trim(), expected)?;
            if rows[r][c] > 4 {
                return Err(bad(line, key, value, expected));
            }
        }
    }
    Ok(rows)
}

fn rewards_value(table: [[u8; 2]; 2]) -> String {
    format!(
        "{},{};{},{}",
        table[0][0], table[0][1], table[1][0], table[1][1]
    )
}

fn parse_game(doc: &mut Document) -> Result<MatrixGame, ConfigError> {
    let Some((line, name)) = doc.take("game") else {
        return Err(ConfigError::Missing("game"));
    };
    let r1 = doc.take("r1");
    let r2 = doc.take("r2");
    if name == "custom" {
        let Some((r1_line, r1_value)) = r1 else {
            return Err(ConfigError::Missing("r1"));
        };
        let row_rewards = parse_rewards(r1_line, "r1", &r1_value)?;
        // r2 defaults to the transpose: both seats see the same game.
        let col_rewards = match r2 {
            Some((r2_line, r2_value)) => parse_rewards(r2_line, "r2", &r2_value)?,
            None => {
                let mut t = [[0u8; 2]; 2];
                for i in 0..2 {
                    for j in 0..2 {
                        t[i][j] = row_rewards[j][i];
                    }
                }
                t
            }
        };
        return MatrixGame::custom("custom", row_rewards, col_rewards)
            .map_err(|e| bad(line, "game", &name, e.to_string()));
    }
    for (key, given) in [("r1", r1), ("r2", r2)] {
        if let Some((extra_line, _)) = given {
            return Err(ConfigError::Inconsistent {
                line: extra_line,
                key: key.to_string(),
                reason: format!("is only valid with game=custom, not game={name}"),
            });
        }
    }
    MatrixGame::builtin(&name).map_err(|_| {
        bad(
            line,
            "game",
            &name,
            format!("one of {} or custom", BUILTIN_GAMES.join(", ")),
        )
    })
}

fn parse_seat(doc: &mut Document, key: &'static str) -> Result<SeatId, ConfigError> {
    let Some((line, value)) = doc.take(key) else {
        return Err(ConfigError::Missing(key));
    };
    SeatId::parse(&value).ok_or_else(|| {
        bad(
            line,
            key,
            &value,
            format!("one of {}", SeatId::IDENTIFIERS.join(", ")),
        )
    })
}

fn parse_depth_key(
    doc: &mut Document,
    key: &str,
    variant: HorizonVariant,
) -> Result<Option<u32>, ConfigError> {
    let Some((line, value)) = doc.take(key) else {
        return Ok(None);
    };
    let depth: u32 = parse_number(line, key, &value, "an integer depth")?;
    if depth == 0 || depth > MAX_DEPTH {
        return Err(bad(
            line,
            key,
            &value,
            format!("a depth in 1..={MAX_DEPTH}"),
        ));
    }
    if variant == HorizonVariant::Consistent && depth < 2 {
        return Err(ConfigError::Inconsistent {
            line,
            key: key.to_string(),
            reason: "must be at least 2 for variant=consistent (the cycle ends at 2)".to_string(),
        });
    }
    Ok(Some(depth))
}

/// Parses and fully validates a config document.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut doc = Document::parse(text)?;
    let game = parse_game(&mut doc)?;
    let row = parse_seat(&mut doc, "row")?;
    let col = parse_seat(&mut doc, "col")?;

    let variant = match doc.take("variant") {
        None => HorizonVariant::Consistent,
        Some((line, value)) => match value.as_str() {
            "consistent" => HorizonVariant::Consistent,
            "moving" => HorizonVariant::Moving,
            "fixed" => HorizonVariant::Fixed,
            _ => return Err(bad(line, "variant", &value, "consistent, moving or fixed")),
        },
    };
    let depth = parse_depth_key(&mut doc, "depth", variant)?.unwrap_or(DEFAULT_DEPTH);
    let depth_b = parse_depth_key(&mut doc, "depth_b", variant)?;
    if depth_b.is_some() && col != SeatId::Planner {
        // find the line again for the report; the key was already taken
        let line = doc
            .entries
            .iter()
            .find(|(k, _)| k == "depth_b")
            .map(|(_, e)| e.line)
            .unwrap_or(0);
        return Err(ConfigError::Inconsistent {
            line,
            key: "depth_b".to_string(),
            reason: "overrides the col seat's planning depth and needs col=aixi".to_string(),
        });
    }

    let steps = match doc.take("steps") {
        None => {
            // block learners need long matches to show their asymptotics
            if row == SeatId::Bandit || col == SeatId::Bandit {
                20_000
            } else {
                100
            }
        }
        Some((line, value)) => {
            let steps: u64 = parse_number(line, "steps", &value, "a positive integer")?;
            if steps == 0 {
                return Err(bad(line, "steps", &value, "a positive integer"));
            }
            steps
        }
    };
    let runs = match doc.take("runs") {
        None => {
            if row.randomizes() || col.randomizes() {
                10
            } else {
                1
            }
        }
        Some((line, value)) => {
            let runs: u32 = parse_number(line, "runs", &value, "a positive integer")?;
            if runs == 0 {
                return Err(bad(line, "runs", &value, "a positive integer"));
            }
            runs
        }
    };
    let seed = match doc.take("seed") {
        None => 0,
        Some((line, value)) => parse_number(line, "seed", &value, "an unsigned 64-bit integer")?,
    };
    let out = match doc.take("out") {
        None => DEFAULT_OUT.to_string(),
        Some((_, value)) => value,
    };

    let support = match doc.take("loss_support") {
        None => LossSupport::stock(),
        Some((line, value)) => {
            let mut values = Vec::new();
            for cell in value.split(',') {
                values.push(parse_number(
                    line,
                    "loss_support",
                    cell.trim(),
                    "comma-separated integers",
                )?);
            }
            LossSupport::new(&values)
                .map_err(|e| bad(line, "loss_support", &value, e.to_string()))?
        }
    };

    let foe_variant = match doc.take("foe_variant") {
        None => FoeVariantId::Faster,
        Some((line, value)) => match value.as_str() {
            "basic" => FoeVariantId::Basic,
            "faster" => FoeVariantId::Faster,
            _ => return Err(bad(line, "foe_variant", &value, "basic or faster")),
        },
    };
    let mc_samples = match doc.take("mc_samples") {
        None => DEFAULT_MC_SAMPLES,
        Some((line, value)) => {
            let n: u32 = parse_number(line, "mc_samples", &value, "a positive integer")?;
            if n == 0 {
                return Err(bad(line, "mc_samples", &value, "a positive integer"));
            }
            n
        }
    };
    let block_schedule = match doc.take("block_schedule") {
        None => BlockSchedule::Sim024,
        Some((line, value)) => match value.as_str() {
            "root8" => BlockSchedule::EighthRoot,
            "root16" => BlockSchedule::SixteenthRoot,
            "sim024" => BlockSchedule::Sim024,
            _ => {
                return Err(bad(
                    line,
                    "block_schedule",
                    &value,
                    "root8, root16 or sim024",
                ))
            }
        },
    };
    let prior = match doc.take("prior") {
        None => Prior::Uniform,
        Some((_, ref value)) if value == "uniform" => Prior::Uniform,
        Some((line, value)) => {
            let mut weights = Vec::new();
            for cell in value.split(',') {
                weights.push(parse_number::<f64>(
                    line,
                    "prior",
                    cell.trim(),
                    "uniform or 16 comma-separated weights",
                )?);
            }
            if weights.len() != EXPERT_COUNT {
                return Err(bad(
                    line,
                    "prior",
                    &value,
                    format!(
                        "uniform or exactly {EXPERT_COUNT} weights, got {}",
                        weights.len()
                    ),
                ));
            }
            Prior::Weights(weights)
        }
    };
    let prior_sign = match doc.take("prior_sign") {
        None => PriorSign::Minus,
        Some((line, value)) => match value.as_str() {
            "minus" => PriorSign::Minus,
            "plus" => PriorSign::Plus,
            _ => return Err(bad(line, "prior_sign", &value, "minus or plus")),
        },
    };

    doc.reject_unknown()?;

    // full validation happens through to_match below, which also
    // covers cross-key facts a single line cannot carry
    let config = RunConfig {
        game,
        row,
        col,
        steps,
        runs,
        seed,
        out,
        support,
        variant,
        depth,
        depth_b,
        foe_variant,
        mc_samples,
        block_schedule,
        prior,
        prior_sign,
    };
    // surface cross-key problems now: loss-support gaps against the
    // game's rewards, and bandit knobs (validated even when no seat
    // uses them, so a typo cannot hide behind the seat choice)
    config
        .foe_config()
        .validate()
        .map_err(|e| ConfigError::Unresolvable(e.to_string()))?;
    config.to_match()?;
    Ok(config)
}

/// Renders the canonical document: every key in a fixed order with
/// defaults written out, so equal configs serialize identically.
pub fn serialize_config(config: &RunConfig) -> String {
    let mut lines = Vec::new();
    if BUILTIN_GAMES.contains(&config.game.name()) {
        lines.push(format!("game={}", config.game.name()));
    } else {
        lines.push("game=custom".to_string());
        lines.push(format!("r1={}", rewards_value(config.game.row_rewards())));
        lines.push(format!("r2={}", rewards_value(config.game.col_rewards())));
    }
    lines.push(format!("row={}", config.row));
    lines.push(format!("col={}", config.col));
    lines.push(format!("steps={}", config.steps));
    lines.push(format!("runs={}", config.runs));
    lines.push(format!("seed={}", config.seed));
    lines.push(format!("out={}", config.out));
    let support: Vec<String> = config
        .support
        .values()
        .iter()
        .map(|v| v.to_string())
        .collect();
    lines.push(format!("loss_support={}", support.join(",")));
    lines.push(format!("variant={}", config.variant.token()));
    lines.push(format!("depth={}", config.depth));
    if let Some(depth_b) = config.depth_b {
        lines.push(format!("depth_b={depth_b}"));
    }
    lines.push(format!("foe_variant={}", config.foe_variant.token()));
    lines.push(format!("mc_samples={}", config.mc_samples));
    lines.push(format!(
        "block_schedule={}",
        schedule_token(config.block_schedule)
    ));
    match &config.prior {
        Prior::Uniform => lines.push("prior=uniform".to_string()),
        Prior::Weights(w) => {
            let cells: Vec<String> = w.iter().map(f64::to_string).collect();
            lines.push(format!("prior={}", cells.join(",")));
        }
    }
    let sign = match config.prior_sign {
        PriorSign::Minus => "minus",
        PriorSign::Plus => "plus",
    };
    lines.push(format!("prior_sign={sign}"));
    let mut text = lines.join("\n");
    text.push('\n');
    text
}

impl RunConfig {
    /// The bandit configuration these fields describe.
    pub fn foe_config(&self) -> FoeConfig {
        let variant = match self.foe_variant {
            FoeVariantId::Basic => FoeVariant::Basic,
            FoeVariantId::Faster => FoeVariant::Faster {
                mc_samples: self.mc_samples,
            },
        };
        FoeConfig {
            variant,
            block_schedule: self.block_schedule,
            prior: self.prior.clone(),
            prior_sign: self.prior_sign,
        }
    }

    fn horizon(&self, depth: u32) -> Result<Horizon, ConfigError> {
        let built = match self.variant {
            HorizonVariant::Consistent => Horizon::cycling(depth, 2),
            HorizonVariant::Moving => Horizon::moving(depth),
            HorizonVariant::Fixed => Horizon::fixed(depth),
        };
        built.map_err(|e| ConfigError::Unresolvable(e.to_string()))
    }

    /// The scripted holdout's venue depends on the game: in the venue
    /// game it insists on the seat's favoured venue and yields to the
    /// adversary's, everywhere else it insists on defection until
    /// defected at.
    fn stubborn(&self, seat: Seat, run_required: u8) -> Result<OpponentSpec, ConfigError> {
        let built = if self.game.name() == "battle_of_sexes" {
            let adversary_venue = match seat {
                Seat::Row => Action::Defect,
                Seat::Col => Action::Cooperate,
            };
            OpponentSpec::stubborn_coordination(run_required, adversary_venue)
        } else {
            OpponentSpec::stubborn_versus_defection(run_required)
        };
        built.map_err(|e| ConfigError::Unresolvable(e.to_string()))
    }

    fn player(&self, seat: Seat, id: SeatId) -> Result<PlayerSpec, ConfigError> {
        Ok(match id {
            SeatId::Planner => {
                let depth = match seat {
                    Seat::Row => self.depth,
                    Seat::Col => self.depth_b.unwrap_or(self.depth),
                };
                PlayerSpec::Aixi(AixiConfig {
                    horizon: self.horizon(depth)?,
                    support: self.support.clone(),
                })
            }
            SeatId::Bandit => {
                let config = self.foe_config();
                config
                    .validate()
                    .map_err(|e| ConfigError::Unresolvable(e.to_string()))?;
                PlayerSpec::Foe(config)
            }
            SeatId::Random => PlayerSpec::Scripted(OpponentSpec::UniformRandom),
            SeatId::TitForTat(lookback) => PlayerSpec::Scripted(
                OpponentSpec::tit_for_tat(lookback)
                    .map_err(|e| ConfigError::Unresolvable(e.to_string()))?,
            ),
            SeatId::Alternating(start) => PlayerSpec::Scripted(OpponentSpec::Alternating { start }),
            SeatId::Stubborn(run_required) => {
                PlayerSpec::Scripted(self.stubborn(seat, run_required)?)
            }
        })
    }

    /// Resolves into the arena's match description, revalidating
    /// everything the arena cares about (loss-support coverage of the
    /// game's rewards, prior admissibility).
    pub fn to_match(&self) -> Result<MatchConfig, ConfigError> {
        let config = MatchConfig {
            game: self.game.clone(),
            row: self.player(Seat::Row, self.row)?,
            col: self.player(Seat::Col, self.col)?,
            steps: self.steps,
            runs: self.runs,
            master_seed: self.seed,
        };
        config
            .validate()
            .map_err(|e| ConfigError::Unresolvable(e.to_string()))?;
        Ok(config)
    }
}
