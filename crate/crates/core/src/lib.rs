//! Tournament engine for repeated 2x2 matrix games.
//!
//! Two learning agents play against each other or against scripted
//! opponents over thousands of simultaneous-move rounds:
//!
//! * [`aixi`]: a Bayesian expectimin planner that mixes over all
//!   two-state Markov opponents with a Laplace-style estimator and
//!   plans over a bounded-depth action/percept tree.
//! * [`foe`]: a follow-or-explore bandit master that switches between
//!   sixteen deterministic Markov experts using follow-the-perturbed-leader
//!   selections and importance-weighted loss estimates.
//!
//! [`arena`] runs seeded, reproducible matches and computes cooperation
//! and reward metrics; [`acceptance`] packages the end-to-end checks the
//! binary's `selftest` subcommand and the integration suite both run.

pub mod acceptance;
pub mod aixi;
pub mod arena;
pub mod bayes;
pub mod foe;
pub mod game;
pub mod opponents;

pub use game::{Action, JointAction, MatrixGame};
