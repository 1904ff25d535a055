//! Behavioral contract suite.
//!
//! Thirteen numbered checks pin down what the engine must reproduce,
//! from exact planner equivalence against an independent enumerator to
//! threshold behavior of full matches. Each check is self-contained and
//! deterministic (fixed seeds), returns a [`CriterionReport`], and is
//! exposed individually so the test harness and the CLI selftest can
//! both run them. Check 13 is informational: it documents an expected
//! ordering between learner variants without gating the suite.
//!
//! Runtime budgets are part of each contract; a check that produces the
//! right numbers too slowly fails.

use crate::aixi::{plan_values, AixiConfig, Horizon};
use crate::arena::{run_match, MatchConfig, Metric, PlayerSpec, Seat};
use crate::bayes::{LossMatrixBelief, LossSupport, TransitionCounts};
use crate::foe::{
    begin_master_step, finish_master_step, fpl_select, learning_rate, FoeConfig, FoeState,
    FoeVariant, EXPERT_COUNT,
};
use crate::game::{Action, MatrixGame};
use crate::opponents::OpponentSpec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use std::time::{Duration, Instant};

/// Outcome of one numbered check.
#[derive(Clone, Debug)]
pub struct CriterionReport {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    /// Informational checks report but never gate the suite.
    pub gating: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl CriterionReport {
    /// One-line human-readable verdict.
    pub fn line(&self) -> String {
        let verdict = match (self.gating, self.passed) {
            (true, true) => "PASS",
            (true, false) => "FAIL",
            (false, true) => "INFO-PASS",
            (false, false) => "INFO-FAIL",
        };
        format!(
            "{verdict} criterion {:02} {} ({:.2}s) {}",
            self.id,
            self.name,
            self.elapsed.as_secs_f64(),
            self.detail
        )
    }
}

/// Runs every check in order.
pub fn run_all() -> Vec<CriterionReport> {
    vec![
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
        criterion_9(),
        criterion_10(),
        criterion_11(),
        criterion_12(),
        criterion_13(),
    ]
}

/// Independent full-tree enumerator used as the planner's reference.
///
/// Deliberately shares no code with the production planner: transition
/// probabilities are recounted from a raw base array plus the explicit
/// branch path at every node, the loss belief is a plain `Option<i32>`
/// grid, and losses revealed along the branch live in a pin list that
/// is searched linearly.
pub mod reference {
    /// Laplace-smoothed probability of `next` given `(own, prev)`,
    /// counting base tallies plus matching events on the current path.
    fn path_prob(
        base: &[[[u32; 2]; 2]; 2],
        path: &[(usize, usize, usize)],
        own: usize,
        prev: usize,
        next: usize,
    ) -> f64 {
        let mut cell = [f64::from(base[own][prev][0]), f64::from(base[own][prev][1])];
        for &(o, p, n) in path {
            if o == own && p == prev {
                cell[n] += 1.0;
            }
        }
        (cell[next] + 1.0) / (cell[0] + cell[1] + 2.0)
    }

    struct Instance<'a> {
        base: &'a [[[u32; 2]; 2]; 2],
        belief: &'a [[Option<i32>; 2]; 2],
        support: &'a [i32],
    }

    fn descend(
        inst: &Instance<'_>,
        path: &mut Vec<(usize, usize, usize)>,
        pins: &mut Vec<(usize, usize, i32)>,
        adversary_move: usize,
        depth: u32,
    ) -> (f64, f64) {
        let mut values = [0.0f64; 2];
        for (own, value) in values.iter_mut().enumerate() {
            let known = inst.belief[own][adversary_move].or_else(|| {
                pins.iter()
                    .find(|&&(o, a, _)| o == own && a == adversary_move)
                    .map(|&(_, _, v)| v)
            });
            *value = match known {
                Some(loss) => f64::from(loss) + rest(inst, path, pins, adversary_move, own, depth),
                None => {
                    let mut acc = 0.0;
                    for &loss in inst.support {
                        pins.push((own, adversary_move, loss));
                        acc += f64::from(loss) + rest(inst, path, pins, adversary_move, own, depth);
                        pins.pop();
                    }
                    acc / inst.support.len() as f64
                }
            };
        }
        (values[0], values[1])
    }

    fn rest(
        inst: &Instance<'_>,
        path: &mut Vec<(usize, usize, usize)>,
        pins: &mut Vec<(usize, usize, i32)>,
        adversary_move: usize,
        own: usize,
        depth: u32,
    ) -> f64 {
        if depth <= 1 {
            return 0.0;
        }
        let mut future = 0.0;
        for next in 0..2 {
            let p = path_prob(inst.base, path, own, adversary_move, next);
            path.push((own, adversary_move, next));
            let (vd, vc) = descend(inst, path, pins, next, depth - 1);
            path.pop();
            future += p * vd.min(vc);
        }
        future
    }

    /// `(value of defect, value of cooperate)` for a hypothesized
    /// current adversary move, by brute-force enumeration.
    pub fn expectimin_values(
        base: &[[[u32; 2]; 2]; 2],
        belief: &[[Option<i32>; 2]; 2],
        support: &[i32],
        adversary_move: usize,
        depth: u32,
    ) -> (f64, f64) {
        let mut path = Vec::new();
        let mut pins = Vec::new();
        let inst = Instance {
            base,
            belief,
            support,
        };
        descend(&inst, &mut path, &mut pins, adversary_move, depth)
    }
}

fn report(
    id: u32,
    name: &'static str,
    gating: bool,
    started: Instant,
    budget: Duration,
    core_pass: bool,
    detail: String,
) -> CriterionReport {
    let elapsed = started.elapsed();
    let in_budget = elapsed <= budget;
    let detail = if in_budget {
        detail
    } else {
        format!("{detail}; over budget {budget:?}")
    };
    CriterionReport {
        id,
        name,
        passed: core_pass && in_budget,
        gating,
        detail,
        elapsed,
    }
}

fn game(name: &str) -> MatrixGame {
    MatrixGame::builtin(name).expect("builtin name")
}

fn tft(lookback: u8) -> PlayerSpec {
    PlayerSpec::Scripted(OpponentSpec::tit_for_tat(lookback).expect("valid lookback"))
}

fn aixi_with(horizon: Horizon) -> PlayerSpec {
    PlayerSpec::Aixi(AixiConfig {
        horizon,
        support: LossSupport::stock(),
    })
}

fn match_over(
    game: MatrixGame,
    row: PlayerSpec,
    col: PlayerSpec,
    steps: u64,
    runs: u32,
    master_seed: u64,
) -> MatchConfig {
    MatchConfig {
        game,
        row,
        col,
        steps,
        runs,
        master_seed,
    }
}

fn mean_metric(config: &MatchConfig, metric: Metric) -> f64 {
    let series = run_match(config).expect("match runs");
    let total: f64 = series
        .iter()
        .map(|s| metric.eval(s, Seat::Row, config.steps))
        .sum();
    total / series.len() as f64
}

/// 1: the planner's action values match the independent enumerator to
/// 1e-12 on 200 randomized instances of depth up to 4.
pub fn criterion_1() -> CriterionReport {
    let started = Instant::now();
    let mut rng = ChaCha12Rng::seed_from_u64(0xACCE_5501);
    let support = LossSupport::stock();
    let mut max_diff = 0.0f64;
    for _ in 0..200 {
        let mut base = [[[0u32; 2]; 2]; 2];
        let mut counts = TransitionCounts::new();
        for (own, plane) in base.iter_mut().enumerate() {
            for (prev, row) in plane.iter_mut().enumerate() {
                for (next, cell) in row.iter_mut().enumerate() {
                    let c = rng.random_range(0..=25u32);
                    *cell = c;
                    for _ in 0..c {
                        counts.record(
                            Action::from_bit(own == 1),
                            Action::from_bit(prev == 1),
                            Action::from_bit(next == 1),
                        );
                    }
                }
            }
        }
        let mut raw_belief = [[None; 2]; 2];
        let mut belief = LossMatrixBelief::new(support.clone());
        for (own, row) in raw_belief.iter_mut().enumerate() {
            for (adv, cell) in row.iter_mut().enumerate() {
                if rng.random_bool(0.5) {
                    let v = support.values()[rng.random_range(0..support.values().len())];
                    *cell = Some(v);
                    belief
                        .observe(Action::from_bit(own == 1), Action::from_bit(adv == 1), v)
                        .expect("value from support");
                }
            }
        }
        let s0 = rng.random_range(0..2usize);
        let depth = rng.random_range(1..=4u32);
        let got = plan_values(Action::from_bit(s0 == 1), counts, &belief, depth);
        let want = reference::expectimin_values(&base, &raw_belief, support.values(), s0, depth);
        max_diff = max_diff
            .max((got.0 - want.0).abs())
            .max((got.1 - want.1).abs());
    }
    let pass = max_diff <= 1e-12;
    report(
        1,
        "planner-reference-equivalence",
        true,
        started,
        Duration::from_secs(5),
        pass,
        format!("max |diff| {max_diff:.3e} over 200 instances (need <= 1e-12)"),
    )
}

/// 2: the posterior predictor normalizes exactly and converges to the
/// true coin bias within 0.05 after 1e4 observations.
pub fn criterion_2() -> CriterionReport {
    let started = Instant::now();
    let mut exact = true;
    for n_defect in 0..40u32 {
        for n_coop in 0..40u32 {
            let mut counts = TransitionCounts::new();
            for _ in 0..n_defect {
                counts.record(Action::Cooperate, Action::Defect, Action::Defect);
            }
            for _ in 0..n_coop {
                counts.record(Action::Cooperate, Action::Defect, Action::Cooperate);
            }
            let total = counts.prob_of(Action::Cooperate, Action::Defect, Action::Defect)
                + counts.prob_of(Action::Cooperate, Action::Defect, Action::Cooperate);
            if total != 1.0 {
                exact = false;
            }
        }
    }
    let mut rng = ChaCha12Rng::seed_from_u64(0xACCE_5502);
    let mut worst: f64 = 0.0;
    for tenths in 1..=9u32 {
        let p = f64::from(tenths) / 10.0;
        let mut counts = TransitionCounts::new();
        for _ in 0..10_000 {
            let next = Action::from_bit(rng.random::<f64>() < p);
            counts.record(Action::Cooperate, Action::Cooperate, next);
        }
        worst = worst.max((counts.predict(Action::Cooperate, Action::Cooperate) - p).abs());
    }
    let pass = exact && worst <= 0.05;
    report(
        2,
        "posterior-predictor-properties",
        true,
        started,
        Duration::from_secs(5),
        pass,
        format!(
            "normalization exact: {exact}; worst |prediction - bias| {worst:.4} (need <= 0.05)"
        ),
    )
}

/// 3: with the 8..2 cycling horizon the planner learns to cooperate
/// with a 1-step copycat in the dilemma game within 100 steps.
pub fn criterion_3() -> CriterionReport {
    let started = Instant::now();
    let config = match_over(
        game("prisoners_dilemma"),
        aixi_with(Horizon::cycling_default()),
        tft(1),
        100,
        1,
        0,
    );
    let series = run_match(&config).expect("match runs");
    let coop = series[0].cooperation_rate(Seat::Row, 100);
    let reward = series[0].average_reward(Seat::Row, 100);
    let pass = coop >= 0.8 && reward >= 2.5;
    report(
        3,
        "planner-cooperates-with-copycat",
        true,
        started,
        Duration::from_secs(120),
        pass,
        format!("coop {coop:.3} (need >= 0.8), avg reward {reward:.3} (need >= 2.5)"),
    )
}

/// 4: against a copycat that demands 3 consecutive cooperations, every
/// planning depth up to 8 stays locked into defection.
pub fn criterion_4() -> CriterionReport {
    let started = Instant::now();
    let pd = game("prisoners_dilemma");
    let mut worst = 0.0f64;
    let mut horizons: Vec<(String, Horizon)> = (1..=8)
        .map(|d| (format!("fixed{d}"), Horizon::fixed(d).expect("valid depth")))
        .collect();
    horizons.push(("cycle8..2".into(), Horizon::cycling_default()));
    for (_, horizon) in &horizons {
        let config = match_over(pd.clone(), aixi_with(*horizon), tft(3), 100, 1, 0);
        let series = run_match(&config).expect("match runs");
        worst = worst.max(series[0].cooperation_rate(Seat::Row, 100));
    }
    let pass = worst <= 0.2;
    report(
        4,
        "planner-defects-against-grudging-copycat",
        true,
        started,
        Duration::from_secs(120),
        pass,
        format!("max coop {worst:.3} across fixed depths 1..=8 and the 8..2 cycle (need <= 0.2)"),
    )
}

/// 5: in the stag hunt against a 2-step copycat, the depth cycle that
/// restarts at 8 never unlocks cooperation but the cycle restarting at
/// 9 finds and keeps it.
pub fn criterion_5() -> CriterionReport {
    let started = Instant::now();
    let sh = game("stag_hunt");
    let coop_of = |longest: u32| {
        let config = match_over(
            sh.clone(),
            aixi_with(Horizon::cycling(longest, 2).expect("valid cycle")),
            tft(2),
            100,
            1,
            0,
        );
        let series = run_match(&config).expect("match runs");
        series[0].cooperation_rate(Seat::Row, 100)
    };
    let shallow = coop_of(8);
    let deep = coop_of(9);
    let pass = shallow <= 0.2 && deep >= 0.8;
    report(
        5,
        "stag-hunt-depth-sensitivity",
        true,
        started,
        Duration::from_secs(600),
        pass,
        format!(
            "cycle-from-8 coop {shallow:.3} (need <= 0.2), cycle-from-9 coop {deep:.3} (need >= 0.8)"
        ),
    )
}

/// 6: the cycling horizon's average reward at step 100 is at least the
/// moving horizon's of the same top depth, in every benchmark matchup;
/// with top depth 9 in the stag hunt the gap is strict, because only
/// the shrinking depths of the cycle carry a probe through to payoff.
pub fn criterion_6() -> CriterionReport {
    let started = Instant::now();
    let reward_of = |g: &MatrixGame, horizon: Horizon, lookback: u8| {
        let config = match_over(g.clone(), aixi_with(horizon), tft(lookback), 100, 1, 0);
        let series = run_match(&config).expect("match runs");
        series[0].average_reward(Seat::Row, 100)
    };
    let pd = game("prisoners_dilemma");
    let sh = game("stag_hunt");
    let pd_cycle = reward_of(&pd, Horizon::cycling_default(), 1);
    let pd_moving = reward_of(&pd, Horizon::moving(8).expect("valid depth"), 1);
    let sh_cycle = reward_of(&sh, Horizon::cycling_default(), 2);
    let sh_moving = reward_of(&sh, Horizon::moving(8).expect("valid depth"), 2);
    let sh9_cycle = reward_of(&sh, Horizon::cycling(9, 2).expect("valid cycle"), 2);
    let sh9_moving = reward_of(&sh, Horizon::moving(9).expect("valid depth"), 2);
    let pass = pd_cycle >= pd_moving && sh_cycle >= sh_moving && sh9_cycle >= sh9_moving;
    report(
        6,
        "cycling-horizon-dominates-moving",
        true,
        started,
        Duration::from_secs(300),
        pass,
        format!(
            "dilemma {pd_cycle:.3} vs {pd_moving:.3}; stag hunt d8 {sh_cycle:.3} vs {sh_moving:.3}, d9 {sh9_cycle:.3} vs {sh9_moving:.3}"
        ),
    )
}

/// 7: two identical planners in the symmetric dilemma game mirror each
/// other's action at every one of 100 steps, exactly.
pub fn criterion_7() -> CriterionReport {
    let started = Instant::now();
    let config = match_over(
        game("prisoners_dilemma"),
        aixi_with(Horizon::cycling_default()),
        aixi_with(Horizon::cycling_default()),
        100,
        1,
        0,
    );
    let series = run_match(&config).expect("match runs");
    let mismatches = series[0]
        .steps()
        .iter()
        .filter(|r| r.joint.row != r.joint.col)
        .count();
    let pass = mismatches == 0;
    report(
        7,
        "deterministic-self-play-symmetry",
        true,
        started,
        Duration::from_secs(120),
        pass,
        format!("{mismatches} mismatched steps out of 100 (need 0)"),
    )
}

/// 8: the faster-learning bandit reaches majority cooperation with the
/// 3-step copycat by the end of 20000 steps, averaged over 10 runs.
pub fn criterion_8() -> CriterionReport {
    let started = Instant::now();
    let coop = final_window_coop(FoeVariant::Faster { mc_samples: 1000 }, 0xACCE_5508);
    let pass = coop >= 0.6;
    report(
        8,
        "bandit-learns-grudging-copycat",
        true,
        started,
        Duration::from_secs(600),
        pass,
        format!("mean coop over final 2000 steps {coop:.3} (need >= 0.6)"),
    )
}

/// Mean cooperation rate over steps 18001..=20000 of the dilemma game
/// against a 3-step copycat, for a given bandit variant.
fn final_window_coop(variant: FoeVariant, master_seed: u64) -> f64 {
    let config = match_over(
        game("prisoners_dilemma"),
        PlayerSpec::Foe(FoeConfig {
            variant,
            ..FoeConfig::default()
        }),
        tft(3),
        20_000,
        10,
        master_seed,
    );
    let series = run_match(&config).expect("match runs");
    series
        .iter()
        .map(|s| s.window_cooperation_rate(Seat::Row, 18_001, 20_000))
        .sum::<f64>()
        / series.len() as f64
}

/// 9: against a uniform-random adversary the bandit's long-run average
/// reward lands near the best expert's achievable 2.5.
pub fn criterion_9() -> CriterionReport {
    let started = Instant::now();
    let config = match_over(
        game("prisoners_dilemma"),
        PlayerSpec::Foe(FoeConfig::default()),
        PlayerSpec::Scripted(OpponentSpec::UniformRandom),
        20_000,
        10,
        0xACCE_5509,
    );
    let reward = mean_metric(&config, Metric::AverageReward);
    let pass = (reward - 2.5).abs() <= 0.3;
    report(
        9,
        "bandit-tracks-best-expert-vs-noise",
        true,
        started,
        Duration::from_secs(600),
        pass,
        format!("mean avg reward {reward:.3} (need within 0.3 of 2.5)"),
    )
}

/// 10: the importance-weighted loss estimates are unbiased: the total
/// estimate increment averaged over 1e5 fresh replications matches the
/// summed true losses within 1% (basic) and 2% (Monte-Carlo weighted).
pub fn criterion_10() -> CriterionReport {
    let started = Instant::now();
    let losses: Vec<f64> = (0..EXPERT_COUNT).map(|i| (i + 1) as f64 / 16.0).collect();
    let truth: f64 = losses.iter().sum();
    let reps = 100_000u32;

    let replicate = |variant: FoeVariant, seed: u64| -> (f64, [f64; EXPERT_COUNT]) {
        let config = FoeConfig {
            variant,
            ..FoeConfig::default()
        };
        let base = FoeState::new(&config).expect("valid config");
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let mut total = 0.0;
        let mut per_expert = [0.0; EXPERT_COUNT];
        for _ in 0..reps {
            let mut state = base.clone();
            let plan = begin_master_step(&state, &config, &mut rng).expect("active experts");
            let loss = losses[plan.expert];
            let record = finish_master_step(&mut state, &config, &plan, loss, 1, &mut rng)
                .expect("block books");
            total += record.est_increment;
            per_expert[plan.expert] += record.est_increment;
        }
        let n = f64::from(reps);
        let mut means = [0.0; EXPERT_COUNT];
        for (m, p) in means.iter_mut().zip(per_expert) {
            *m = p / n;
        }
        (total / n, means)
    };

    let (basic_mean, basic_per) = replicate(FoeVariant::Basic, 0xACCE_550A);
    let basic_rel = (basic_mean - truth).abs() / truth;
    let basic_worst = basic_per
        .iter()
        .zip(&losses)
        .map(|(m, l)| (m - l).abs() / l)
        .fold(0.0f64, f64::max);

    let (faster_mean, _) = replicate(FoeVariant::Faster { mc_samples: 1000 }, 0xACCE_550B);
    let faster_rel = (faster_mean - truth).abs() / truth;

    let pass = basic_rel <= 0.01 && basic_worst <= 0.05 && faster_rel <= 0.02;
    report(
        10,
        "loss-estimator-unbiasedness",
        true,
        started,
        Duration::from_secs(60),
        pass,
        format!(
            "basic total rel err {basic_rel:.4} (need <= 0.01), per-expert worst {basic_worst:.4} \
             (need <= 0.05); mc-weighted total rel err {faster_rel:.4} (need <= 0.02)"
        ),
    )
}

/// 11: under full information, following the perturbed leader against a
/// fixed loss vector keeps average regret at or below 0.1 over 1e4
/// rounds.
pub fn criterion_11() -> CriterionReport {
    let started = Instant::now();
    let config = FoeConfig::default();
    let mut state = FoeState::new(&config).expect("valid config");
    let mut rng = ChaCha12Rng::seed_from_u64(0xACCE_550C);
    let mut ell = [0.9f64; EXPERT_COUNT];
    ell[11] = 0.1;
    let best = 0.1;
    let rounds = 10_000u64;
    let mut incurred = 0.0;
    for tau in 1..=rounds {
        let pick = fpl_select(&state, learning_rate(tau), &mut rng).expect("active experts");
        incurred += ell[pick];
        for (i, &l) in ell.iter().enumerate() {
            state.credit_loss(i, l);
        }
    }
    let avg_regret = incurred / rounds as f64 - best;
    let pass = avg_regret <= 0.1;
    report(
        11,
        "perturbed-leader-regret",
        true,
        started,
        Duration::from_secs(10),
        pass,
        format!("average regret {avg_regret:.4} over 1e4 rounds (need <= 0.1)"),
    )
}

/// 12: both learners exploit a strictly alternating adversary in the
/// matching game: the planner averages >= 3.5 within 100 steps, the
/// bandit >= 3.0 over 20000.
pub fn criterion_12() -> CriterionReport {
    let started = Instant::now();
    let mp = game("matching_pennies");
    let alternating = PlayerSpec::Scripted(OpponentSpec::Alternating {
        start: Action::Defect,
    });
    let planner_config = match_over(
        mp.clone(),
        aixi_with(Horizon::cycling_default()),
        alternating.clone(),
        100,
        1,
        0,
    );
    let planner_series = run_match(&planner_config).expect("match runs");
    let planner_reward = planner_series[0].average_reward(Seat::Row, 100);
    let bandit_config = match_over(
        mp,
        PlayerSpec::Foe(FoeConfig::default()),
        alternating,
        20_000,
        10,
        0xACCE_550D,
    );
    let bandit_reward = mean_metric(&bandit_config, Metric::AverageReward);
    let pass = planner_reward >= 3.5 && bandit_reward >= 3.0;
    report(
        12,
        "predictable-adversary-exploitation",
        true,
        started,
        Duration::from_secs(600),
        pass,
        format!(
            "planner avg reward {planner_reward:.3} (need >= 3.5), \
             bandit mean avg reward {bandit_reward:.3} (need >= 3.0)"
        ),
    )
}

/// 13 (informational): at 20000 steps the faster-learning variant has
/// reached the cooperation level of check 8 while the basic variant has
/// not; the basic variant needs far longer horizons.
pub fn criterion_13() -> CriterionReport {
    let started = Instant::now();
    let faster = final_window_coop(FoeVariant::Faster { mc_samples: 1000 }, 0xACCE_5508);
    let basic = final_window_coop(FoeVariant::Basic, 0xACCE_5508);
    let ordering_holds = faster >= 0.6 && basic < 0.6;
    report(
        13,
        "variant-learning-speed-ordering",
        false,
        started,
        Duration::from_secs(600),
        ordering_holds,
        format!(
            "final-window coop: faster {faster:.3} (reaches 0.6: {}), basic {basic:.3} \
             (still below: {})",
            faster >= 0.6,
            basic < 0.6
        ),
    )
}
