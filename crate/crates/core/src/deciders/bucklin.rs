//! Bucklin and simplified Bucklin with one manipulator.
//!
//! With `N = n + 1` voters, `c` fails to co-win iff for some alternative
//! `a` and prefix length `k < m`:
//!
//! * simplified Bucklin: `a` is in a strict majority of top-`k` prefixes
//!   while `c` is not;
//! * Bucklin: the same, except that `c` must also lack a majority at
//!   `k - 1` and `a` must appear in strictly more top-`k` prefixes than `c`.
//!
//! The manipulator ranks `c` first, so its ballot adds one to every count of
//! `c` (for prefixes of length ≥ 1) and adds one to the counts of `a` exactly
//! for `k ≥ t`, where `t` is `a`'s position. Whether the adversary can meet
//! the conditions therefore only depends on `(a, k, [k ≥ t])`, and both
//! answers are computed up front.

use super::{greedy_decision, require_single_manipulator, Decision, SafetyCheck};
use crate::error::Result;
use crate::model::{Alternative, Instance, Ranking};
use crate::perturbation::{bucklin_metatype, classify_kapproval, BucklinType, KApprovalType};

/// `fails[a][k - 1][bonus]`: the adversary defeats `c` through `a` at
/// prefix `k` when the manipulator adds `bonus` to `a`'s count.
type FailureTable = Vec<Vec<[bool; 2]>>;

fn is_safe_in(table: &FailureTable, a: Alternative, t: usize) -> bool {
    table[a.0]
        .iter()
        .enumerate()
        .all(|(i, f)| !f[usize::from(i + 1 >= t)])
}

#[derive(Debug, Clone)]
pub struct SimplifiedBucklinSafety<'a> {
    inst: &'a Instance,
    fails: FailureTable,
}

impl<'a> SimplifiedBucklinSafety<'a> {
    pub fn new(inst: &'a Instance) -> Self {
        let m = inst.m();
        let c = inst.c();
        let big_n = inst.n() + 1;
        let mut fails = vec![Vec::new(); m];
        for a in (0..m).map(Alternative).filter(|&a| a != c) {
            fails[a.0] = (1..m)
                .map(|k| {
                    let mut counts = [0usize; 5];
                    for (r, &d) in inst.profile().rankings().iter().zip(inst.deltas()) {
                        counts[kapproval_slot(classify_kapproval(r, d, c, a, k))] += 1;
                    }
                    let [both, either, _c_out, a_in, neither] = counts;
                    [0usize, 1].map(|bonus| {
                        // `l` ballots of the either-or kind keep both in the prefix.
                        (0..=either).any(|l| {
                            let a_count = both + l + a_in + bonus;
                            let c_count = l + a_in + neither + 1;
                            2 * a_count > big_n && 2 * c_count <= big_n
                        })
                    })
                })
                .collect();
        }
        SimplifiedBucklinSafety { inst, fails }
    }
}

fn kapproval_slot(t: KApprovalType) -> usize {
    match t {
        KApprovalType::Both => 0,
        KApprovalType::Either => 1,
        KApprovalType::COutOnly => 2,
        KApprovalType::AInOnly => 3,
        KApprovalType::Neither => 4,
    }
}

impl SafetyCheck for SimplifiedBucklinSafety<'_> {
    fn instance(&self) -> &Instance {
        self.inst
    }

    fn is_safe(&self, a: Alternative, t: usize, _above: &[Alternative]) -> bool {
        is_safe_in(&self.fails, a, t)
    }
}

#[derive(Debug, Clone)]
pub struct BucklinSafety<'a> {
    inst: &'a Instance,
    fails: FailureTable,
}

impl<'a> BucklinSafety<'a> {
    pub fn new(inst: &'a Instance) -> Self {
        let m = inst.m();
        let c = inst.c();
        let mut fails = vec![Vec::new(); m];
        for a in (0..m).map(Alternative).filter(|&a| a != c) {
            fails[a.0] = (1..m).map(|k| bucklin_failures(inst, a, k)).collect();
        }
        BucklinSafety { inst, fails }
    }
}

/// Runs a DP over the ballots. A ballot's reachable types fix whether it
/// counts towards `A_k` (a in top k), `C_k` and `C_{k-1}`. For every
/// reachable `(A_k, C_k)` only the smallest `C_{k-1}` matters.
fn bucklin_failures(inst: &Instance, a: Alternative, k: usize) -> [bool; 2] {
    let c = inst.c();
    let n = inst.n();
    let big_n = n + 1;
    const NONE: usize = usize::MAX;
    // best[A * (n + 1) + C_k] = min C_{k-1}
    let mut best = vec![NONE; (n + 1) * (n + 1)];
    best[0] = 0;
    let mut next = best.clone();
    for (r, &d) in inst.profile().rankings().iter().zip(inst.deltas()) {
        let mut options: Vec<(usize, usize, usize)> = bucklin_metatype(r, d, c, a, k)
            .iter()
            .map(|t| {
                (
                    usize::from(t.has(BucklinType::X4)),
                    usize::from(!t.has(BucklinType::X1)),
                    usize::from(!t.has(BucklinType::X2)),
                )
            })
            .collect();
        options.sort_unstable();
        options.dedup();
        next.iter_mut().for_each(|x| *x = NONE);
        for ai in 0..=n {
            for ck in 0..=n {
                let cur = best[ai * (n + 1) + ck];
                if cur == NONE {
                    continue;
                }
                for &(da, dc, dc1) in &options {
                    let slot = &mut next[(ai + da) * (n + 1) + ck + dc];
                    *slot = (*slot).min(cur + dc1);
                }
            }
        }
        std::mem::swap(&mut best, &mut next);
    }
    // The manipulator puts c first: it is in every prefix of length ≥ 1.
    let c_prev_bonus = usize::from(k >= 2);
    [0usize, 1].map(|bonus| {
        (0..=n).any(|ai| {
            (0..=n).any(|ck| {
                let ck1 = best[ai * (n + 1) + ck];
                ck1 != NONE
                    && 2 * (ai + bonus) > big_n
                    && ai + bonus > ck + 1
                    && 2 * (ck1 + c_prev_bonus) <= big_n
            })
        })
    })
}

impl SafetyCheck for BucklinSafety<'_> {
    fn instance(&self) -> &Instance {
        self.inst
    }

    fn is_safe(&self, a: Alternative, t: usize, _above: &[Alternative]) -> bool {
        is_safe_in(&self.fails, a, t)
    }
}

fn trivial_yes() -> Decision {
    Decision::Yes {
        witness: vec![Ranking::identity(1)],
    }
}

pub fn decide_simplified_bucklin(inst: &Instance) -> Result<Decision> {
    require_single_manipulator(inst, "simplified Bucklin")?;
    if inst.m() == 1 {
        return Ok(trivial_yes());
    }
    Ok(greedy_decision(&SimplifiedBucklinSafety::new(inst)))
}

pub fn decide_bucklin(inst: &Instance) -> Result<Decision> {
    require_single_manipulator(inst, "Bucklin")?;
    if inst.m() == 1 {
        return Ok(trivial_yes());
    }
    Ok(greedy_decision(&BucklinSafety::new(inst)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Profile;
    use crate::rules::{Evaluator, Rule};
    use itertools::Itertools;

    fn all_rankings(m: usize) -> Vec<Ranking> {
        (0..m)
            .permutations(m)
            .map(|p| Ranking::from_indices(&p).unwrap())
            .collect()
    }

    /// With no perturbation the deciders must match classical manipulation.
    fn zero_budget_agrees(rule: Rule, m: usize, n: usize) {
        let all = all_rankings(m);
        let ev = Evaluator::new(&rule, m).unwrap();
        for picks in (0..all.len()).combinations_with_replacement(n) {
            let p = Profile::new(picks.iter().map(|&i| all[i].clone()).collect()).unwrap();
            for c in (0..m).map(Alternative) {
                let inst = Instance::uniform(p.clone(), c, 0, 1, rule.clone()).unwrap();
                let direct = all.iter().any(|w| ev.cowins(&inst.ballots_with(std::slice::from_ref(w)), c));
                let d = match rule {
                    Rule::Bucklin => decide_bucklin(&inst),
                    _ => decide_simplified_bucklin(&inst),
                }
                .unwrap();
                assert_eq!(d.is_yes(), direct, "{p:?} c={c:?}");
                if let Some(w) = d.witness() {
                    assert!(ev.cowins(&inst.ballots_with(w), c));
                }
            }
        }
    }

    #[test]
    fn bucklin_zero_budget() {
        zero_budget_agrees(Rule::Bucklin, 3, 2);
        zero_budget_agrees(Rule::Bucklin, 4, 2);
    }

    #[test]
    fn simplified_bucklin_zero_budget() {
        zero_budget_agrees(Rule::SimplifiedBucklin, 3, 3);
        zero_budget_agrees(Rule::SimplifiedBucklin, 4, 2);
    }

    #[test]
    fn single_voter_boundary() {
        // n = 1, N = 2: a majority means both ballots. Once the voter can drop
        // c out of its top two, the manipulator's second choice gets there
        // first.
        let p = Profile::from_indices(&[&[2, 0, 1]]).unwrap();
        for (delta, expected) in [(0, true), (1, true), (2, false), (3, false)] {
            let inst = Instance::uniform(p.clone(), Alternative(2), delta, 1, Rule::SimplifiedBucklin).unwrap();
            assert_eq!(decide_simplified_bucklin(&inst).unwrap().is_yes(), expected, "δ={delta}");
        }
    }

    #[test]
    fn safety_is_monotone_in_position() {
        let p = Profile::from_indices(&[&[0, 1, 2, 3], &[1, 0, 3, 2], &[0, 2, 1, 3]]).unwrap();
        for d in 0..=2 {
            let inst = Instance::uniform(p.clone(), Alternative(3), d, 1, Rule::Bucklin).unwrap();
            let b = BucklinSafety::new(&inst);
            let s = SimplifiedBucklinSafety::new(&inst);
            for a in (0..3).map(Alternative) {
                for t in 3..=4 {
                    if !b.is_safe(a, t, &[]) {
                        assert!(!b.is_safe(a, t - 1, &[]));
                    }
                    if !s.is_safe(a, t, &[]) {
                        assert!(!s.is_safe(a, t - 1, &[]));
                    }
                }
            }
        }
    }
}
