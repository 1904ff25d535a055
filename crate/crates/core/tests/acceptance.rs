//! End-to-end behavioral contract suite: one test per numbered check,
//! each printing its verdict line. Informational checks print but never
//! fail the build.

use uml_core::acceptance::{self, CriterionReport};

fn check(report: CriterionReport) {
    println!("{}", report.line());
    if report.gating {
        assert!(report.passed, "{}", report.line());
    }
}

#[test]
fn criterion_01_planner_reference_equivalence() {
    check(acceptance::criterion_1());
}

#[test]
fn criterion_02_posterior_predictor_properties() {
    check(acceptance::criterion_2());
}

#[test]
fn criterion_03_planner_cooperates_with_copycat() {
    check(acceptance::criterion_3());
}

#[test]
fn criterion_04_planner_defects_against_grudging_copycat() {
    check(acceptance::criterion_4());
}

#[test]
fn criterion_05_stag_hunt_depth_sensitivity() {
    check(acceptance::criterion_5());
}

#[test]
fn criterion_06_cycling_horizon_dominates_moving() {
    check(acceptance::criterion_6());
}

#[test]
fn criterion_07_deterministic_self_play_symmetry() {
    check(acceptance::criterion_7());
}

#[test]
fn criterion_08_bandit_learns_grudging_copycat() {
    check(acceptance::criterion_8());
}

#[test]
fn criterion_09_bandit_tracks_best_expert_vs_noise() {
    check(acceptance::criterion_9());
}

#[test]
fn criterion_10_loss_estimator_unbiasedness() {
    check(acceptance::criterion_10());
}

#[test]
fn criterion_11_perturbed_leader_regret() {
    check(acceptance::criterion_11());
}

#[test]
fn criterion_12_predictable_adversary_exploitation() {
    check(acceptance::criterion_12());
}

#[test]
fn criterion_13_variant_learning_speed_ordering() {
    check(acceptance::criterion_13());
}
