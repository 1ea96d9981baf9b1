//! Deciders for Stable Manipulation: can a group of manipulators cast
//! ballots that keep their favourite alternative a co-winner however the
//! other voters' ballots deviate, within per-voter Kendall-Tau budgets, from
//! what the manipulators believe them to be?

pub mod deciders;
pub mod error;
pub mod experiments;
pub mod flow;
pub mod model;
pub mod oracle;
pub mod perturbation;
pub mod rules;

pub use deciders::{decide, Decision, Refutation};
pub use error::{Error, Result};
pub use experiments::{ExperimentConfig, ExperimentRow};
pub use model::{kendall_tau, Alternative, AlternativeSet, Instance, Profile, Ranking};
pub use oracle::{decide_anonymous, decide_exhaustive, AnonymousBudget, ExhaustiveBudget};
pub use rules::{winners, CopelandAlpha, Evaluator, Rule, ScoringVector};
