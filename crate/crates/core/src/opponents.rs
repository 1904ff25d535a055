//! Scripted opponents for calibration matches.
//!
//! Each opponent is a small reactive policy over the adversary's recent
//! moves. State updates and action choice are pure functions of
//! ([`OpponentSpec`], [`OpponentState`]) so the same policy can be
//! replayed or embedded behind the arena's player interface.

use crate::game::Action;
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OpponentError {
    #[error("run length must be at least 1")]
    ZeroRun,
    #[error("tit-for-tat lookback {0} outside 1..=3")]
    LookbackOutOfRange(u8),
}

/// Opponent policy kinds.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum OpponentSpec {
    /// Fair coin every step.
    UniformRandom,
    /// `lookback = 1`: cooperate first, then copy the adversary's last
    /// move. `lookback >= 2`: defect first, cooperate only while the
    /// adversary's last `lookback` moves were all cooperation.
    TitForTat { lookback: u8 },
    /// Plays `start`, then flips every step.
    Alternating { start: Action },
    /// Plays the opposite of `yield_action` until the adversary has
    /// played `trigger_action` for `run_required` consecutive steps,
    /// then yields for as long as that run persists.
    Stubborn {
        run_required: u8,
        yield_action: Action,
        trigger_action: Action,
    },
}

impl OpponentSpec {
    pub fn tit_for_tat(lookback: u8) -> Result<Self, OpponentError> {
        if !(1..=3).contains(&lookback) {
            return Err(OpponentError::LookbackOutOfRange(lookback));
        }
        Ok(OpponentSpec::TitForTat { lookback })
    }

    /// Insists on defection and cooperates only once the adversary has
    /// defected `run_required` times in a row (the chicken-style bully).
    pub fn stubborn_versus_defection(run_required: u8) -> Result<Self, OpponentError> {
        if run_required == 0 {
            return Err(OpponentError::ZeroRun);
        }
        Ok(OpponentSpec::Stubborn {
            run_required,
            yield_action: Action::Cooperate,
            trigger_action: Action::Defect,
        })
    }

    /// Insists on its own venue and joins the adversary's venue only once
    /// the adversary has insisted on it `run_required` times in a row
    /// (the coordination-game holdout).
    pub fn stubborn_coordination(run_required: u8, venue: Action) -> Result<Self, OpponentError> {
        if run_required == 0 {
            return Err(OpponentError::ZeroRun);
        }
        Ok(OpponentSpec::Stubborn {
            run_required,
            yield_action: venue,
            trigger_action: venue,
        })
    }

    pub fn randomizes(&self) -> bool {
        matches!(self, OpponentSpec::UniformRandom)
    }
}

/// Minimal memory shared by all opponent kinds.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct OpponentState {
    /// Consecutive adversary plays of the policy's watched action,
    /// counted up to and including the last completed step.
    pub adversary_run: u32,
    pub last_own: Option<Action>,
    /// Completed steps; the step about to be played is `steps_done + 1`.
    pub steps_done: u32,
}

impl OpponentState {
    pub fn new() -> Self {
        Self::default()
    }
}

/// Chooses the current move. Only `UniformRandom` consumes randomness.
pub fn opponent_act<R: Rng + ?Sized>(
    spec: OpponentSpec,
    state: &OpponentState,
    rng: &mut R,
) -> Action {
    match spec {
        OpponentSpec::UniformRandom => Action::from_bit(rng.random::<bool>()),
        OpponentSpec::TitForTat { lookback } => {
            if state.steps_done == 0 {
                // generous start only for plain copying
                Action::from_bit(lookback == 1)
            } else {
                Action::from_bit(state.adversary_run >= u32::from(lookback))
            }
        }
        OpponentSpec::Alternating { start } => {
            if state.steps_done.is_multiple_of(2) {
                start
            } else {
                start.other()
            }
        }
        OpponentSpec::Stubborn {
            run_required,
            yield_action,
            ..
        } => {
            if state.adversary_run >= u32::from(run_required) {
                yield_action
            } else {
                yield_action.other()
            }
        }
    }
}

/// Folds one completed step into the state. `adversary` is the other
/// seat's move this step; the watched-run counter tracks cooperation for
/// tit-for-tat and the trigger action for stubborn policies.
pub fn opponent_observe(
    spec: OpponentSpec,
    state: &mut OpponentState,
    own: Action,
    adversary: Action,
) {
    let watched = match spec {
        OpponentSpec::TitForTat { .. } => Action::Cooperate,
        OpponentSpec::Stubborn { trigger_action, .. } => trigger_action,
        // unused by the other kinds; keep the counter meaningful anyway
        _ => Action::Cooperate,
    };
    if adversary == watched {
        state.adversary_run += 1;
    } else {
        state.adversary_run = 0;
    }
    state.last_own = Some(own);
    state.steps_done += 1;
}
