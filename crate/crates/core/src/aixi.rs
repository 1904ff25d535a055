//! Bayesian expectimin planner over a bounded action/percept tree.
//!
//! Each decision expands a depth-`d` tree. A node holds the adversary's
//! hypothesized current move; for each own action the node adds the
//! immediate loss and the predicted mixture over the adversary's next
//! move times the best (minimal) child value. The transition tallies
//! are forked and updated hypothetically along every branch, so deeper
//! levels plan with the posterior they would hold if that branch
//! actually happened.
//!
//! A branch that plays a cell whose loss is still unknown splits over
//! every admissible loss value with equal weight, and the sampled value
//! stays pinned for the rest of that branch. This is what makes trying
//! an unseen cell worth something: the branch that reveals a low loss
//! exploits it for all remaining steps, so the value of the experiment
//! grows with the depth left below it. Cells the branch never plays
//! stay unknown; nothing is averaged away up front.
//!
//! At the root the adversary's simultaneous move is unknown, so the two
//! per-action values are mixed over it with the same predictor before
//! taking the argmin. Ties break toward defect, which keeps the agent
//! fully deterministic.

use crate::bayes::{BeliefError, EntryBelief, LossMatrixBelief, LossSupport, TransitionCounts};
use crate::game::Action;
use thiserror::Error;

/// Deepest tree the desk-scale budget allows: 4^12 nodes per decision.
pub const MAX_DEPTH: u32 = 12;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AixiError {
    #[error("planning depth {0} outside 1..={MAX_DEPTH}")]
    DepthOutOfRange(u32),
    #[error("cycling horizon needs longest >= shortest >= 2, got {longest}..{shortest}")]
    BadCycle { longest: u32, shortest: u32 },
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum HorizonKind {
    Fixed(u32),
    Moving(u32),
    Cycle { longest: u32, shortest: u32 },
}

/// Planning-depth schedule.
///
/// `fixed` and `moving` plan the same depth every step (they differ only
/// in how a run is described in configs). `cycling` restarts at the
/// longest depth and shrinks by one each step down to the shortest, so
/// consecutive decisions stay consistent with the plan made at the top
/// of the cycle.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Horizon(HorizonKind);

impl Horizon {
    pub fn fixed(depth: u32) -> Result<Self, AixiError> {
        check_depth(depth)?;
        Ok(Horizon(HorizonKind::Fixed(depth)))
    }

    pub fn moving(depth: u32) -> Result<Self, AixiError> {
        check_depth(depth)?;
        Ok(Horizon(HorizonKind::Moving(depth)))
    }

    pub fn cycling(longest: u32, shortest: u32) -> Result<Self, AixiError> {
        check_depth(longest)?;
        if shortest < 2 || longest < shortest {
            return Err(AixiError::BadCycle { longest, shortest });
        }
        Ok(Horizon(HorizonKind::Cycle { longest, shortest }))
    }

    /// The stock cycle 8,7,...,2.
    pub fn cycling_default() -> Self {
        Self::cycling(8, 2).expect("stock cycle is valid")
    }

    /// Planning depth for a 1-based step index.
    pub fn depth_at(self, step: u64) -> u32 {
        match self.0 {
            HorizonKind::Fixed(d) | HorizonKind::Moving(d) => d,
            HorizonKind::Cycle { longest, shortest } => {
                let period = u64::from(longest - shortest + 1);
                longest - ((step - 1) % period) as u32
            }
        }
    }

    pub fn max_depth(self) -> u32 {
        match self.0 {
            HorizonKind::Fixed(d) | HorizonKind::Moving(d) => d,
            HorizonKind::Cycle { longest, .. } => longest,
        }
    }
}

fn check_depth(depth: u32) -> Result<(), AixiError> {
    if depth == 0 || depth > MAX_DEPTH {
        return Err(AixiError::DepthOutOfRange(depth));
    }
    Ok(())
}

/// Per-action expected losses `(value of defect, value of cooperate)`
/// for a hypothesized current adversary move. See the module docs for
/// the recursion; `depth = 1` returns just the believed immediate
/// losses.
pub fn plan_values(
    adversary_move: Action,
    counts: TransitionCounts,
    belief: &LossMatrixBelief,
    depth: u32,
) -> (f64, f64) {
    plan_values_counted(adversary_move, counts, belief, depth).0
}

/// Same as [`plan_values`] but also reports how many tree nodes were
/// expanded. With a fully known loss matrix one root move expands
/// exactly sum_{k<d} 4^k nodes; every first in-branch visit to an
/// unknown cell multiplies that branch by the support size.
pub fn plan_values_counted(
    adversary_move: Action,
    counts: TransitionCounts,
    belief: &LossMatrixBelief,
    depth: u32,
) -> ((f64, f64), u64) {
    let mut entries = [[EntryBelief::Unknown; 2]; 2];
    for own in Action::ALL {
        for adv in Action::ALL {
            entries[own.index()][adv.index()] = belief.entry(own, adv);
        }
    }
    let mut nodes = 0u64;
    let values = descend(
        adversary_move,
        counts,
        entries,
        belief.support().values(),
        depth,
        &mut nodes,
    );
    (values, nodes)
}

fn descend(
    adversary_move: Action,
    counts: TransitionCounts,
    entries: [[EntryBelief; 2]; 2],
    support: &[i32],
    depth: u32,
    nodes: &mut u64,
) -> (f64, f64) {
    *nodes += 1;
    let mut values = [0.0f64; 2];
    for own in Action::ALL {
        values[own.index()] = match entries[own.index()][adversary_move.index()] {
            EntryBelief::Known(loss) => {
                f64::from(loss)
                    + successor_value(adversary_move, own, counts, entries, support, depth, nodes)
            }
            // First in-branch play of an unseen cell: split over the
            // support, pinning each sampled loss for the whole subtree.
            EntryBelief::Unknown => {
                let mut acc = 0.0;
                for &loss in support {
                    let mut pinned = entries;
                    pinned[own.index()][adversary_move.index()] = EntryBelief::Known(loss);
                    acc += f64::from(loss)
                        + successor_value(
                            adversary_move,
                            own,
                            counts,
                            pinned,
                            support,
                            depth,
                            nodes,
                        );
                }
                acc / support.len() as f64
            }
        };
    }
    (values[0], values[1])
}

/// Predicted value of the rest of the plan after playing `own` against
/// `adversary_move`: the transition mixture over the adversary's next
/// move times the best child value, with the tallies forked to include
/// the hypothesized transition.
fn successor_value(
    adversary_move: Action,
    own: Action,
    counts: TransitionCounts,
    entries: [[EntryBelief; 2]; 2],
    support: &[i32],
    depth: u32,
    nodes: &mut u64,
) -> f64 {
    if depth <= 1 {
        return 0.0;
    }
    let mut future = 0.0;
    for next in Action::ALL {
        let p = counts.prob_of(own, adversary_move, next);
        let mut forked = counts;
        forked.record(own, adversary_move, next);
        let (child_d, child_c) = descend(next, forked, entries, support, depth - 1, nodes);
        future += p * child_d.min(child_c);
    }
    future
}

#[derive(Clone, PartialEq, Debug)]
pub struct AixiConfig {
    pub horizon: Horizon,
    pub support: LossSupport,
}

impl Default for AixiConfig {
    fn default() -> Self {
        AixiConfig {
            horizon: Horizon::cycling_default(),
            support: LossSupport::stock(),
        }
    }
}

/// The planning agent's full state: transition tallies, loss belief, the
/// last completed joint move (own, adversary) and the 1-based index of
/// the step about to be played.
#[derive(Clone, PartialEq, Debug)]
pub struct AixiPlayer {
    horizon: Horizon,
    counts: TransitionCounts,
    belief: LossMatrixBelief,
    last_joint: Option<(Action, Action)>,
    step: u64,
}

impl AixiPlayer {
    pub fn new(config: AixiConfig) -> Self {
        AixiPlayer {
            horizon: config.horizon,
            counts: TransitionCounts::new(),
            belief: LossMatrixBelief::new(config.support),
            last_joint: None,
            step: 1,
        }
    }

    /// Rebuilds a player mid-history; used by tests and replay tooling.
    pub fn from_parts(
        horizon: Horizon,
        counts: TransitionCounts,
        belief: LossMatrixBelief,
        last_joint: Option<(Action, Action)>,
        step: u64,
    ) -> Self {
        AixiPlayer {
            horizon,
            counts,
            belief,
            last_joint,
            step,
        }
    }

    pub fn counts(&self) -> &TransitionCounts {
        &self.counts
    }

    pub fn belief(&self) -> &LossMatrixBelief {
        &self.belief
    }

    pub fn step(&self) -> u64 {
        self.step
    }

    /// Last completed `(own, adversary)` move, if any step finished.
    pub fn last_joint(&self) -> Option<(Action, Action)> {
        self.last_joint
    }

    /// Deterministic move choice for the current step.
    pub fn decide(&self) -> Action {
        self.decide_counted().0
    }

    /// Move choice plus the number of expanded tree nodes.
    ///
    /// Each hypothesized current adversary move is planned with tallies
    /// that already include the transition leading into it, so the
    /// subtree's posterior is consistent with its own hypothesis; the
    /// first step has no prior transition and both branches share the
    /// untouched tallies.
    pub fn decide_counted(&self) -> (Action, u64) {
        // A fresh start is symmetric under relabeling both players'
        // actions, so the two root values tie exactly and the tie
        // breaks toward defect; skip the expensive enumeration.
        if self.last_joint.is_none() && self.belief.known_count() == 0 && self.counts.total() == 0 {
            return (Action::Defect, 0);
        }
        let depth = self.horizon.depth_at(self.step);
        let (p_coop, entered) = match self.last_joint {
            None => (
                TransitionCounts::predict_first(),
                [self.counts, self.counts],
            ),
            Some((own, adv)) => {
                let mut entered = [self.counts, self.counts];
                for move_in in Action::ALL {
                    entered[move_in.index()].record(own, adv, move_in);
                }
                (self.counts.predict(own, adv), entered)
            }
        };
        let ((d0, d1), n0) = plan_values_counted(Action::Defect, entered[0], &self.belief, depth);
        let ((c0, c1), n1) =
            plan_values_counted(Action::Cooperate, entered[1], &self.belief, depth);
        let value_defect = (1.0 - p_coop) * d0 + p_coop * c0;
        let value_cooperate = (1.0 - p_coop) * d1 + p_coop * c1;
        let action = if value_defect <= value_cooperate {
            Action::Defect
        } else {
            Action::Cooperate
        };
        (action, n0 + n1)
    }

    /// Folds one completed step into the model: pins the loss entry for
    /// the realized joint move and, from the second step on, tallies the
    /// adversary's transition.
    pub fn learn(
        &mut self,
        own: Action,
        adversary: Action,
        own_loss: i32,
    ) -> Result<(), BeliefError> {
        self.belief.observe(own, adversary, own_loss)?;
        if let Some((prev_own, prev_adv)) = self.last_joint {
            self.counts.record(prev_own, prev_adv, adversary);
        }
        self.last_joint = Some((own, adversary));
        self.step += 1;
        Ok(())
    }
}
