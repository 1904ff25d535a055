//! Follow-or-explore master over sixteen Markov experts.
//!
//! Time is grouped into blocks. At the start of block `tau` the master
//! either explores (probability `tau^-1/4`, sampling an expert from the
//! prior restricted to currently active experts) or exploits via
//! follow-the-perturbed-leader: every active expert's cumulative
//! estimated loss is scored with a log-prior term and an independent
//! Exp(1) perturbation, and the minimizer plays the whole block.
//!
//! Loss feedback is bandit-style: only the selected expert's block loss
//! is seen. The `Basic` variant learns only from exploration blocks,
//! dividing by the exploration probability mass; the `Faster` variant
//! learns from every block, dividing by a Monte-Carlo estimate of the
//! joint selection probability. Either way the estimate increment is an
//! importance-weighted, unbiased (up to the Monte-Carlo floor) stand-in
//! for the true block loss.
//!
//! Elementary losses are fed on the 0..=4 reward-complement scale and
//! normalized to [0,1] here, so block losses live in [0, block_len].

use crate::game::Action;
use rand::Rng;
use rand_chacha::ChaCha12Rng;
use rand_distr::Exp1;
use thiserror::Error;

pub const EXPERT_COUNT: usize = 16;

#[derive(Debug, Error, PartialEq)]
pub enum FoeError {
    #[error("expert id {0} outside 0..{EXPERT_COUNT}")]
    BadExpertId(u8),
    #[error("prior weight {0} not in (0, 1]")]
    BadWeight(f64),
    #[error("prior needs exactly {EXPERT_COUNT} weights, got {0}")]
    PriorLength(usize),
    #[error("prior mass {0} exceeds 1")]
    PriorMass(f64),
    #[error("no expert is active at master step {0}")]
    EmptyActiveSet(u64),
    #[error("expected {expected} perturbations for the active set, got {got}")]
    PerturbationCount { expected: usize, got: usize },
    #[error("block loss {loss} outside [0, {max}]")]
    BlockLossOutOfRange { loss: f64, max: f64 },
    #[error("consumed {consumed} steps of a block of {block_len}")]
    ConsumedOutOfRange { consumed: u64, block_len: u64 },
    #[error("elementary loss {0} outside 0..=4")]
    RawLossOutOfRange(u8),
    #[error("selection-probability estimation needs at least 1 sample")]
    ZeroSamples,
    #[error("loss fed without a block in progress")]
    LearnWithoutAct,
}

/// Deterministic reactive expert: a 4-entry lookup table from the last
/// joint move to an action, packed into the 4 bits of `id`. Bit
/// `own*2 + adversary` holds the move after that joint outcome; id 0
/// always defects, id 15 always cooperates. With no history yet (the
/// match's first round) the expert plays a fair coin.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct MarkovExpert {
    id: u8,
}

impl MarkovExpert {
    pub fn new(id: u8) -> Result<Self, FoeError> {
        if usize::from(id) >= EXPERT_COUNT {
            return Err(FoeError::BadExpertId(id));
        }
        Ok(MarkovExpert { id })
    }

    pub fn all() -> [MarkovExpert; EXPERT_COUNT] {
        std::array::from_fn(|i| MarkovExpert { id: i as u8 })
    }

    pub fn id(self) -> u8 {
        self.id
    }

    pub fn tabled_action(self, own_last: Action, adversary_last: Action) -> Action {
        let bit = own_last.index() * 2 + adversary_last.index();
        Action::from_bit(self.id >> bit & 1 == 1)
    }

    pub fn act<R: Rng + ?Sized>(self, last_joint: Option<(Action, Action)>, rng: &mut R) -> Action {
        match last_joint {
            None => Action::from_bit(rng.random::<bool>()),
            Some((own, adv)) => self.tabled_action(own, adv),
        }
    }
}

/// Block-length growth law, exact integer roots of the master clock.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BlockSchedule {
    /// floor(tau^(1/8)); the regret-bound schedule for uniform priors.
    EighthRoot,
    /// floor(tau^(1/16)); the regret-bound schedule for arbitrary priors.
    SixteenthRoot,
    /// floor(tau^0.24); grows fast enough to matter at desk scale.
    Sim024,
}

impl BlockSchedule {
    /// Block length at a 1-based master step; never below 1.
    pub fn block_len(self, master_step: u64) -> u64 {
        let (p, q) = match self {
            BlockSchedule::EighthRoot => (1, 8),
            BlockSchedule::SixteenthRoot => (1, 16),
            BlockSchedule::Sim024 => (6, 25),
        };
        int_root_floor(master_step, p, q).max(1)
    }
}

/// Largest k with k^q <= tau^p, exact in u128 at any realistic clock;
/// falls back to guarded floating point when tau^p overflows (tau
/// beyond ~2.6e6 for the 6/25 exponent, far past desk scale).
fn int_root_floor(tau: u64, p: u32, q: u32) -> u64 {
    let target = match u128::from(tau).checked_pow(p) {
        Some(t) => t,
        None => return ((tau as f64).powf(f64::from(p) / f64::from(q)) + 1e-9) as u64,
    };
    let mut lo = 1u128; // k = 1 always qualifies since tau >= 1
    let mut hi = 1u128 << 17;
    while lo + 1 < hi {
        let mid = (lo + hi) / 2;
        let fits = match mid.checked_pow(q) {
            Some(v) => v <= target,
            None => false,
        };
        if fits {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo as u64
}

/// Exploration probability `tau^(-1/4)`.
pub fn exploration_rate(master_step: u64) -> f64 {
    (master_step as f64).powf(-0.25)
}

/// Estimate sensitivity `tau^(-3/4)` in the perturbed-leader score.
pub fn learning_rate(master_step: u64) -> f64 {
    (master_step as f64).powf(-0.75)
}

/// Master step at which an expert of prior weight `w` becomes eligible:
/// `ceil(w^-16)`. Saturates to `u128::MAX` (never enters) when the
/// weight is so small the power overflows.
pub fn entering_time(weight: f64) -> Result<u128, FoeError> {
    if !(weight > 0.0 && weight <= 1.0) {
        return Err(FoeError::BadWeight(weight));
    }
    let raw = weight.powi(-16);
    if raw >= u128::MAX as f64 {
        return Ok(u128::MAX);
    }
    Ok(raw.ceil() as u128)
}

#[derive(Clone, PartialEq, Debug)]
pub enum Prior {
    Uniform,
    /// Explicit positive weights, one per expert, total mass at most 1.
    Weights(Vec<f64>),
}

impl Prior {
    fn validate(&self) -> Result<(), FoeError> {
        if let Prior::Weights(w) = self {
            if w.len() != EXPERT_COUNT {
                return Err(FoeError::PriorLength(w.len()));
            }
            for &x in w {
                if !(x > 0.0 && x <= 1.0) || !x.is_finite() {
                    return Err(FoeError::BadWeight(x));
                }
            }
            let mass: f64 = w.iter().sum();
            if mass > 1.0 + 1e-9 {
                return Err(FoeError::PriorMass(mass));
            }
        }
        Ok(())
    }

    fn weight_vec(&self) -> Vec<f64> {
        match self {
            Prior::Uniform => vec![1.0 / EXPERT_COUNT as f64; EXPERT_COUNT],
            Prior::Weights(w) => w.clone(),
        }
    }
}

/// Sign of the log-prior term in the perturbed-leader score.
/// `Minus` scores `eta*loss - ln w - q` (small prior weight is a
/// penalty); `Plus` keeps the literal `+ ln w` form. Irrelevant under a
/// uniform prior, where the term is an equal constant.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PriorSign {
    Minus,
    Plus,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FoeVariant {
    /// Learns only from exploration blocks.
    Basic,
    /// Learns from every block, importance-weighting by a Monte-Carlo
    /// estimate of the selection probability from `mc_samples` draws.
    Faster { mc_samples: u32 },
}

#[derive(Clone, PartialEq, Debug)]
pub struct FoeConfig {
    pub variant: FoeVariant,
    pub block_schedule: BlockSchedule,
    pub prior: Prior,
    pub prior_sign: PriorSign,
}

impl Default for FoeConfig {
    fn default() -> Self {
        FoeConfig {
            variant: FoeVariant::Faster { mc_samples: 1000 },
            block_schedule: BlockSchedule::Sim024,
            prior: Prior::Uniform,
            prior_sign: PriorSign::Minus,
        }
    }
}

impl FoeConfig {
    pub fn validate(&self) -> Result<(), FoeError> {
        self.prior.validate()?;
        if let FoeVariant::Faster { mc_samples } = self.variant {
            if mc_samples == 0 {
                return Err(FoeError::ZeroSamples);
            }
        }
        Ok(())
    }
}

/// Master-scale learning state: the clock, cumulative estimated losses,
/// prior weights and per-expert eligibility times.
#[derive(Clone, PartialEq, Debug)]
pub struct FoeState {
    master_step: u64,
    est_loss: Vec<f64>,
    weights: Vec<f64>,
    entering: Vec<u128>,
    elementary_offset: u64,
    prior_sign: PriorSign,
}

impl FoeState {
    pub fn new(config: &FoeConfig) -> Result<Self, FoeError> {
        config.validate()?;
        let weights = config.prior.weight_vec();
        let entering = match &config.prior {
            // the uniform-prior law has every expert eligible from the start
            Prior::Uniform => vec![1u128; EXPERT_COUNT],
            Prior::Weights(w) => {
                let mut entering = Vec::with_capacity(EXPERT_COUNT);
                for &x in w {
                    entering.push(entering_time(x)?);
                }
                // the heaviest experts enter immediately so a selection
                // is always possible
                let top = w.iter().cloned().fold(f64::MIN, f64::max);
                for (i, &x) in w.iter().enumerate() {
                    if x == top {
                        entering[i] = 1;
                    }
                }
                entering
            }
        };
        Ok(FoeState {
            master_step: 1,
            est_loss: vec![0.0; EXPERT_COUNT],
            weights,
            entering,
            elementary_offset: 0,
            prior_sign: config.prior_sign,
        })
    }

    pub fn master_step(&self) -> u64 {
        self.master_step
    }

    /// Elementary steps attributed to completed blocks.
    pub fn elementary_offset(&self) -> u64 {
        self.elementary_offset
    }

    pub fn est_loss(&self) -> &[f64] {
        &self.est_loss
    }

    pub fn entering(&self) -> &[u128] {
        &self.entering
    }

    /// Experts eligible at the current master step, ascending.
    pub fn active(&self) -> Vec<usize> {
        (0..EXPERT_COUNT)
            .filter(|&i| u128::from(self.master_step) >= self.entering[i])
            .collect()
    }

    /// Adds observed loss to one expert's cumulative estimate. The
    /// bandit path feeds importance-weighted block losses through here;
    /// a full-information driver can instead credit every expert its
    /// true loss each round.
    pub fn credit_loss(&mut self, expert: usize, loss: f64) {
        self.est_loss[expert] += loss;
    }

    fn prior_term(&self, expert: usize) -> f64 {
        match self.prior_sign {
            PriorSign::Minus => -self.weights[expert].ln(),
            PriorSign::Plus => self.weights[expert].ln(),
        }
    }
}

/// Perturbed-leader argmin with caller-supplied perturbations, one per
/// active expert in ascending expert order. Ties keep the lowest index.
pub fn fpl_select_with(
    state: &FoeState,
    learning_rate: f64,
    perturbations: &[f64],
) -> Result<usize, FoeError> {
    let active = state.active();
    if active.is_empty() {
        return Err(FoeError::EmptyActiveSet(state.master_step));
    }
    if perturbations.len() != active.len() {
        return Err(FoeError::PerturbationCount {
            expected: active.len(),
            got: perturbations.len(),
        });
    }
    let mut best = active[0];
    let mut best_score = f64::INFINITY;
    for (k, &i) in active.iter().enumerate() {
        let score = learning_rate * state.est_loss[i] + state.prior_term(i) - perturbations[k];
        if score < best_score {
            best_score = score;
            best = i;
        }
    }
    Ok(best)
}

/// Perturbed-leader selection with fresh Exp(1) perturbations.
pub fn fpl_select<R: Rng + ?Sized>(
    state: &FoeState,
    learning_rate: f64,
    rng: &mut R,
) -> Result<usize, FoeError> {
    let n = state.active().len();
    if n == 0 {
        return Err(FoeError::EmptyActiveSet(state.master_step));
    }
    let perturbations: Vec<f64> = (0..n).map(|_| rng.sample(Exp1)).collect();
    fpl_select_with(state, learning_rate, &perturbations)
}

/// One draw from the joint selection law at the current master step:
/// explore with the given probability (prior-weighted over active
/// experts, renormalized), otherwise follow the perturbed leader.
/// Returns (expert, explored). Consumes one Bernoulli draw plus either
/// one uniform or one Exp(1) per active expert.
fn sample_selection<R: Rng + ?Sized>(
    state: &FoeState,
    explore_prob: f64,
    learning_rate: f64,
    rng: &mut R,
) -> Result<(usize, bool), FoeError> {
    if rng.random_bool(explore_prob) {
        let active = state.active();
        if active.is_empty() {
            return Err(FoeError::EmptyActiveSet(state.master_step));
        }
        let mass: f64 = active.iter().map(|&i| state.weights[i]).sum();
        let mut u = rng.random::<f64>() * mass;
        let mut chosen = *active.last().expect("active set is nonempty");
        for &i in &active {
            u -= state.weights[i];
            if u < 0.0 {
                chosen = i;
                break;
            }
        }
        Ok((chosen, true))
    } else {
        Ok((fpl_select(state, learning_rate, rng)?, false))
    }
}

/// Selection made at the top of a block, plus the block's shape.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct BlockPlan {
    pub master_step: u64,
    pub expert: usize,
    pub explored: bool,
    pub block_len: u64,
}

/// Everything a completed block contributed.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct MasterStepRecord {
    pub master_step: u64,
    pub expert: usize,
    pub explored: bool,
    pub block_len: u64,
    /// Elementary steps actually played; below `block_len` only when the
    /// match ended inside the block.
    pub consumed: u64,
    /// Normalized block loss in [0, consumed].
    pub block_loss: f64,
    pub est_increment: f64,
}

/// Samples the selection for the block at the current master step.
pub fn begin_master_step<R: Rng + ?Sized>(
    state: &FoeState,
    config: &FoeConfig,
    rng: &mut R,
) -> Result<BlockPlan, FoeError> {
    let tau = state.master_step;
    let (expert, explored) =
        sample_selection(state, exploration_rate(tau), learning_rate(tau), rng)?;
    Ok(BlockPlan {
        master_step: tau,
        expert,
        explored,
        block_len: config.block_schedule.block_len(tau),
    })
}

/// Books a played block: validates the loss, applies the variant's
/// estimate increment, and advances the master clock. `consumed` may be
/// below the planned length only for a truncated final block, whose
/// shortened loss is still learned.
pub fn finish_master_step<R: Rng + ?Sized>(
    state: &mut FoeState,
    config: &FoeConfig,
    plan: &BlockPlan,
    block_loss: f64,
    consumed: u64,
    rng: &mut R,
) -> Result<MasterStepRecord, FoeError> {
    debug_assert_eq!(state.master_step, plan.master_step);
    if consumed > plan.block_len {
        return Err(FoeError::ConsumedOutOfRange {
            consumed,
            block_len: plan.block_len,
        });
    }
    let max = consumed as f64;
    if !block_loss.is_finite() || block_loss < 0.0 || block_loss > max + 1e-9 {
        return Err(FoeError::BlockLossOutOfRange {
            loss: block_loss,
            max,
        });
    }
    let est_increment = match config.variant {
        FoeVariant::Basic => {
            if plan.explored {
                let active = state.active();
                let mass: f64 = active.iter().map(|&i| state.weights[i]).sum();
                let renorm = state.weights[plan.expert] / mass;
                block_loss / (exploration_rate(plan.master_step) * renorm)
            } else {
                0.0
            }
        }
        FoeVariant::Faster { mc_samples } => {
            let p = estimate_selection_prob(state, plan.expert, mc_samples, rng)?;
            block_loss / p
        }
    };
    state.credit_loss(plan.expert, est_increment);
    state.master_step += 1;
    state.elementary_offset += consumed;
    Ok(MasterStepRecord {
        master_step: plan.master_step,
        expert: plan.expert,
        explored: plan.explored,
        block_len: plan.block_len,
        consumed,
        block_loss,
        est_increment,
    })
}

/// Runs one full master step against a callback that plays the block
/// and returns its normalized loss.
pub fn foe_master_step<R, F>(
    state: &mut FoeState,
    config: &FoeConfig,
    rng: &mut R,
    play_block: F,
) -> Result<MasterStepRecord, FoeError>
where
    R: Rng + ?Sized,
    F: FnOnce(usize, u64) -> f64,
{
    let plan = begin_master_step(state, config, rng)?;
    let block_loss = play_block(plan.expert, plan.block_len);
    finish_master_step(state, config, &plan, block_loss, plan.block_len, rng)
}

/// Monte-Carlo estimate of the probability that the joint selection law
/// at the current master step picks `expert`, floored at
/// `1/(2*samples)` so importance weights stay bounded.
pub fn estimate_selection_prob<R: Rng + ?Sized>(
    state: &FoeState,
    expert: usize,
    samples: u32,
    rng: &mut R,
) -> Result<f64, FoeError> {
    if samples == 0 {
        return Err(FoeError::ZeroSamples);
    }
    let tau = state.master_step;
    let explore_prob = exploration_rate(tau);
    let eta = learning_rate(tau);
    let mut hits = 0u32;
    for _ in 0..samples {
        if sample_selection(state, explore_prob, eta, rng)?.0 == expert {
            hits += 1;
        }
    }
    let floor = 1.0 / (2.0 * f64::from(samples));
    Ok((f64::from(hits) / f64::from(samples)).max(floor))
}

struct CurrentBlock {
    plan: BlockPlan,
    loss: f64,
    consumed: u64,
}

/// Step-at-a-time wrapper used by the arena: begins a block lazily on
/// the first move after the previous block closed, feeds elementary
/// losses, and books the block when its length is reached. Call
/// [`FoePlayer::finish_match`] after the last step so a partially played
/// block is still learned.
pub struct FoePlayer {
    state: FoeState,
    config: FoeConfig,
    rng: ChaCha12Rng,
    current: Option<CurrentBlock>,
    last_joint: Option<(Action, Action)>,
    records: Vec<MasterStepRecord>,
}

impl FoePlayer {
    pub fn new(config: FoeConfig, seed: u64) -> Result<Self, FoeError> {
        use rand::SeedableRng;
        let state = FoeState::new(&config)?;
        Ok(FoePlayer {
            state,
            config,
            rng: ChaCha12Rng::seed_from_u64(seed),
            current: None,
            last_joint: None,
            records: Vec::new(),
        })
    }

    pub fn state(&self) -> &FoeState {
        &self.state
    }

    pub fn records(&self) -> &[MasterStepRecord] {
        &self.records
    }

    /// The move for the current elementary step, delegated to the
    /// selected expert's table on the live last joint move.
    pub fn act(&mut self) -> Result<Action, FoeError> {
        if self.current.is_none() {
            let plan = begin_master_step(&self.state, &self.config, &mut self.rng)?;
            self.current = Some(CurrentBlock {
                plan,
                loss: 0.0,
                consumed: 0,
            });
        }
        let expert = self
            .current
            .as_ref()
            .expect("block just ensured")
            .plan
            .expert;
        Ok(MarkovExpert::all()[expert].act(self.last_joint, &mut self.rng))
    }

    /// Feeds one completed step's own loss on the 0..=4 scale.
    pub fn learn(&mut self, own: Action, adversary: Action, raw_loss: u8) -> Result<(), FoeError> {
        if raw_loss > 4 {
            return Err(FoeError::RawLossOutOfRange(raw_loss));
        }
        let block = self.current.as_mut().ok_or(FoeError::LearnWithoutAct)?;
        block.loss += f64::from(raw_loss) / 4.0;
        block.consumed += 1;
        self.last_joint = Some((own, adversary));
        if block.consumed == block.plan.block_len {
            self.close_block()?;
        }
        Ok(())
    }

    /// Books a truncated final block at match end.
    pub fn finish_match(&mut self) -> Result<(), FoeError> {
        match &self.current {
            Some(block) if block.consumed > 0 => self.close_block(),
            Some(_) => {
                // a block was opened but no step completed; drop it
                self.current = None;
                Ok(())
            }
            None => Ok(()),
        }
    }

    fn close_block(&mut self) -> Result<(), FoeError> {
        let block = self.current.take().expect("caller checked a block exists");
        let record = finish_master_step(
            &mut self.state,
            &self.config,
            &block.plan,
            block.loss,
            block.consumed,
            &mut self.rng,
        )?;
        self.records.push(record);
        Ok(())
    }
}
