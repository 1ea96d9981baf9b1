//! Polynomial-time Stable Manipulation deciders.
//!
//! The single-manipulator deciders share one greedy skeleton: the
//! manipulator ranks `c` first, then fills positions `2..=m` one at a time
//! with any remaining alternative that is *safe* there, i.e. no perturbed
//! profile lets it beat `c`. If some position has no safe candidate the
//! instance is a NO instance, because being unsafe at a position implies
//! being unsafe at every earlier one.

mod bucklin;
mod kapproval;
mod maximin;
mod scoring;

use std::fmt;

use crate::error::{Error, Result};
use crate::model::{Alternative, Instance, Ranking};
use crate::rules::Rule;

pub use bucklin::{decide_bucklin, decide_simplified_bucklin, BucklinSafety, SimplifiedBucklinSafety};
pub use kapproval::{decide_kapproval, kapproval_network, KApprovalNetwork};
pub use maximin::{decide_maximin, MaximinSafety};
pub use scoring::{decide_scoring, ScoringSafety};

/// A perturbed profile together with the manipulator ballots it defeats.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Refutation {
    pub manipulators: Vec<Ranking>,
    pub adversary: Vec<Ranking>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decision {
    /// Manipulator ballots keeping `c` a co-winner against every perturbation.
    Yes { witness: Vec<Ranking> },
    /// No such ballots exist. Oracles attach the last defeating profile they
    /// found.
    No { refutation: Option<Refutation> },
}

impl Decision {
    pub fn is_yes(&self) -> bool {
        matches!(self, Decision::Yes { .. })
    }

    pub fn witness(&self) -> Option<&[Ranking]> {
        match self {
            Decision::Yes { witness } => Some(witness),
            Decision::No { .. } => None,
        }
    }

    pub fn refutation(&self) -> Option<&Refutation> {
        match self {
            Decision::No { refutation } => refutation.as_ref(),
            Decision::Yes { .. } => None,
        }
    }

    pub(crate) fn no() -> Self {
        Decision::No { refutation: None }
    }
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.is_yes() { "YES" } else { "NO" })
    }
}

/// Safety predicate driving the greedy construction.
pub trait SafetyCheck {
    fn instance(&self) -> &Instance;

    /// Whether `a` can sit at 1-indexed position `t ≥ 2` of the
    /// manipulator's ballot when exactly the alternatives in `above`
    /// (starting with `c`) are ranked before it.
    fn is_safe(&self, a: Alternative, t: usize, above: &[Alternative]) -> bool;
}

/// Runs the greedy construction; `None` means some position had no safe
/// candidate. Candidates are tried in id order.
pub fn greedy_ballot(check: &impl SafetyCheck) -> Option<Ranking> {
    let inst = check.instance();
    let m = inst.m();
    let c = inst.c();
    let mut placed = Vec::with_capacity(m);
    placed.push(c);
    let mut remaining: Vec<Alternative> = (0..m).map(Alternative).filter(|&a| a != c).collect();
    for t in 2..=m {
        let i = remaining
            .iter()
            .position(|&a| check.is_safe(a, t, &placed))?;
        placed.push(remaining.remove(i));
    }
    Some(Ranking::new(placed).expect("greedy places every alternative once"))
}

pub(crate) fn greedy_decision(check: &impl SafetyCheck) -> Decision {
    match greedy_ballot(check) {
        Some(ballot) => Decision::Yes {
            witness: vec![ballot],
        },
        None => Decision::no(),
    }
}

pub(crate) fn require_single_manipulator(inst: &Instance, what: &str) -> Result<()> {
    if inst.manipulators() != 1 {
        return Err(Error::Unsupported(format!(
            "the {what} decider handles exactly one manipulator, got {}",
            inst.manipulators()
        )));
    }
    Ok(())
}

/// Whether a polynomial decider exists for this rule and manipulator count.
pub fn has_polynomial_decider(rule: &Rule, m: usize, manipulators: usize) -> bool {
    if m < 2 {
        return true;
    }
    match rule {
        Rule::Plurality | Rule::Veto | Rule::KApproval(_) => true,
        Rule::Scoring(_) | Rule::Borda | Rule::Maximin | Rule::Bucklin | Rule::SimplifiedBucklin => {
            manipulators == 1
        }
        Rule::Copeland(_) | Rule::Stv => false,
    }
}

/// Dispatches to the polynomial decider for the instance's rule.
pub fn decide(inst: &Instance) -> Result<Decision> {
    let m = inst.m();
    if m == 1 {
        return Ok(Decision::Yes {
            witness: vec![Ranking::identity(1); inst.manipulators()],
        });
    }
    let rule = inst.rule();
    if let Some(k) = rule.approval_k(m) {
        return decide_kapproval(inst, k);
    }
    match rule {
        Rule::Scoring(_) | Rule::Borda => {
            let v = rule.scoring_vector(m)?.expect("positional rule");
            decide_scoring(inst, &v)
        }
        Rule::Maximin => decide_maximin(inst),
        Rule::Bucklin => decide_bucklin(inst),
        Rule::SimplifiedBucklin => decide_simplified_bucklin(inst),
        Rule::Copeland(_) => Err(Error::Unsupported(
            "Copeland has no polynomial decider (the problem is co-NP-hard); use the exhaustive oracle"
                .into(),
        )),
        Rule::Stv => Err(Error::Unsupported(
            "STV has no polynomial decider; use the exhaustive oracle".into(),
        )),
        Rule::Plurality | Rule::Veto | Rule::KApproval(_) => unreachable!(),
    }
}
