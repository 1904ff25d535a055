//! Opponent and loss models for the Bayesian planner.
//!
//! The opponent model is a mixture over all two-state Markov reactions:
//! the adversary's next move is predicted from (own last move, adversary
//! last move) with add-one smoothing, which is the exact posterior
//! predictive of a uniform prior over transition probabilities.
//!
//! The loss model tracks each of the four own-loss matrix entries as
//! either known exactly (observed once, then pinned) or unknown, in which
//! case its expectation is the mean of a finite support whose negative
//! outlier keeps unexplored entries attractive.

use crate::game::Action;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum BeliefError {
    #[error("loss support must be nonempty")]
    EmptySupport,
    #[error("observed loss {0} outside the support")]
    SupportViolation(i32),
    #[error("entry ({own}, {adversary}) already known as {known}, observed {observed}")]
    Inconsistent {
        own: usize,
        adversary: usize,
        known: i32,
        observed: i32,
    },
}

/// Transition tallies `n[own_prev][adv_prev][adv_next]`.
///
/// `Copy` on purpose: the planner forks hypothetical copies at every
/// tree branch.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct TransitionCounts {
    n: [[[u32; 2]; 2]; 2],
}

impl TransitionCounts {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&mut self, own_prev: Action, adv_prev: Action, adv_next: Action) {
        self.n[own_prev.index()][adv_prev.index()][adv_next.index()] += 1;
    }

    pub fn count(&self, own_prev: Action, adv_prev: Action, adv_next: Action) -> u32 {
        self.n[own_prev.index()][adv_prev.index()][adv_next.index()]
    }

    pub fn total(&self) -> u64 {
        let mut sum = 0u64;
        for a in &self.n {
            for b in a {
                for &c in b {
                    sum += u64::from(c);
                }
            }
        }
        sum
    }

    /// Posterior predictive probability that the adversary cooperates
    /// next, given the conditioning cell: `(n_coop + 1) / (n_total + 2)`.
    pub fn predict(&self, own_prev: Action, adv_prev: Action) -> f64 {
        let cell = &self.n[own_prev.index()][adv_prev.index()];
        (f64::from(cell[1]) + 1.0) / (f64::from(cell[0]) + f64::from(cell[1]) + 2.0)
    }

    /// Probability of a specific next move. The defect side is computed
    /// as the exact complement so the two always sum to exactly 1.0.
    pub fn prob_of(&self, own_prev: Action, adv_prev: Action, adv_next: Action) -> f64 {
        let coop = self.predict(own_prev, adv_prev);
        match adv_next {
            Action::Cooperate => coop,
            Action::Defect => 1.0 - coop,
        }
    }

    /// Prediction for the very first step, before any conditioning
    /// history exists.
    pub fn predict_first() -> f64 {
        0.5
    }
}

/// Finite set of loss values an entry may take; deduplicated and sorted.
#[derive(Clone, PartialEq, Debug)]
pub struct LossSupport {
    values: Vec<i32>,
    mean: f64,
}

impl LossSupport {
    pub fn new(values: &[i32]) -> Result<Self, BeliefError> {
        let mut v = values.to_vec();
        v.sort_unstable();
        v.dedup();
        if v.is_empty() {
            return Err(BeliefError::EmptySupport);
        }
        let mean = v.iter().map(|&x| f64::from(x)).sum::<f64>() / v.len() as f64;
        Ok(LossSupport { values: v, mean })
    }

    /// The stock support {0,1,2,3,4} plus a -16 outlier. Its mean of -1
    /// undercuts every realizable loss, so unknown entries look better
    /// than anything observed and the planner is drawn to try them.
    pub fn stock() -> Self {
        Self::new(&[0, 1, 2, 3, 4, -16]).expect("stock support is nonempty")
    }

    pub fn contains(&self, value: i32) -> bool {
        self.values.binary_search(&value).is_ok()
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn values(&self) -> &[i32] {
        &self.values
    }
}

impl Default for LossSupport {
    fn default() -> Self {
        Self::stock()
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EntryBelief {
    Known(i32),
    Unknown,
}

/// Per-entry belief over the agent's own 2x2 loss matrix, indexed
/// (own move, adversary move).
#[derive(Clone, PartialEq, Debug)]
pub struct LossMatrixBelief {
    support: LossSupport,
    entries: [[EntryBelief; 2]; 2],
}

impl LossMatrixBelief {
    pub fn new(support: LossSupport) -> Self {
        LossMatrixBelief {
            support,
            entries: [[EntryBelief::Unknown; 2]; 2],
        }
    }

    /// Belief with every entry already pinned; used by tests and replays.
    pub fn fully_known(support: LossSupport, losses: [[i32; 2]; 2]) -> Result<Self, BeliefError> {
        let mut belief = Self::new(support);
        for own in Action::ALL {
            for adv in Action::ALL {
                belief.observe(own, adv, losses[own.index()][adv.index()])?;
            }
        }
        Ok(belief)
    }

    pub fn entry(&self, own: Action, adversary: Action) -> EntryBelief {
        self.entries[own.index()][adversary.index()]
    }

    pub fn support(&self) -> &LossSupport {
        &self.support
    }

    pub fn known_count(&self) -> usize {
        self.entries
            .iter()
            .flatten()
            .filter(|e| matches!(e, EntryBelief::Known(_)))
            .count()
    }

    /// Expected loss of playing `own` against `adversary`: the pinned
    /// value if known, otherwise the support mean.
    pub fn expected_loss(&self, own: Action, adversary: Action) -> f64 {
        match self.entry(own, adversary) {
            EntryBelief::Known(v) => f64::from(v),
            EntryBelief::Unknown => self.support.mean(),
        }
    }

    /// Pins an entry to an observed loss. Re-observing the same value is
    /// a no-op; a different value is a contract violation, as is a loss
    /// outside the support.
    pub fn observe(
        &mut self,
        own: Action,
        adversary: Action,
        loss: i32,
    ) -> Result<(), BeliefError> {
        if !self.support.contains(loss) {
            return Err(BeliefError::SupportViolation(loss));
        }
        let slot = &mut self.entries[own.index()][adversary.index()];
        match *slot {
            EntryBelief::Unknown => {
                *slot = EntryBelief::Known(loss);
                Ok(())
            }
            EntryBelief::Known(v) if v == loss => Ok(()),
            EntryBelief::Known(v) => Err(BeliefError::Inconsistent {
                own: own.index(),
                adversary: adversary.index(),
                known: v,
                observed: loss,
            }),
        }
    }
}
