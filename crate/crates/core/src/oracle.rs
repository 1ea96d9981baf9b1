//! Brute-force ground truth.
//!
//! [`decide_exhaustive`] tries every manipulator profile against every
//! adversary profile in the product of the voters' Kendall-Tau balls.
//! [`decide_anonymous`] works on anonymous profiles instead and matches
//! voters to target rankings with a flow, which is only practical for very
//! small `m`.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use itertools::Itertools;

use crate::deciders::{Decision, Refutation};
use crate::error::{Error, Result};
use crate::flow::FlowNetwork;
use crate::model::{Instance, Profile, Ranking};
use crate::rules::Evaluator;

/// All rankings within Kendall-Tau distance `radius` of `center`, sorted
/// lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KTBall {
    pub center: Ranking,
    pub radius: usize,
    pub members: Vec<Ranking>,
}

impl KTBall {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, r: &Ranking) -> bool {
        self.members.binary_search(r).is_ok()
    }
}

/// Breadth-first search over adjacent transpositions.
pub fn kt_ball(center: &Ranking, radius: usize) -> KTBall {
    let mut seen: HashSet<Ranking> = HashSet::from([center.clone()]);
    let mut frontier = VecDeque::from([(center.clone(), 0usize)]);
    while let Some((r, d)) = frontier.pop_front() {
        if d == radius {
            continue;
        }
        for i in 0..r.m() - 1 {
            let mut next = r.clone();
            next.swap_adjacent(i);
            if seen.insert(next.clone()) {
                frontier.push_back((next, d + 1));
            }
        }
    }
    let mut members: Vec<Ranking> = seen.into_iter().collect();
    members.sort();
    KTBall {
        center: center.clone(),
        radius,
        members,
    }
}

/// Number of rankings of `m` items with at most `radius` inversions.
pub fn kt_ball_size(m: usize, radius: usize) -> u128 {
    // Mahonian numbers by the standard row recurrence.
    let max = m * m.saturating_sub(1) / 2;
    let mut row = vec![0u128; max + 1];
    row[0] = 1;
    for j in 2..=m {
        let mut next = vec![0u128; max + 1];
        for (inv, &count) in row.iter().enumerate().filter(|(_, &c)| c > 0) {
            for extra in 0..j {
                if inv + extra <= max {
                    next[inv + extra] += count;
                }
            }
        }
        row = next;
    }
    row.iter().take(radius.min(max) + 1).sum()
}

/// Rankings with multiplicities; the total is the number of voters.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AnonymousProfile {
    counts: BTreeMap<Ranking, usize>,
}

impl AnonymousProfile {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_rankings<'a>(rankings: impl IntoIterator<Item = &'a Ranking>) -> Self {
        let mut p = Self::new();
        for r in rankings {
            p.add(r.clone(), 1);
        }
        p
    }

    pub fn add(&mut self, r: Ranking, count: usize) {
        if count > 0 {
            *self.counts.entry(r).or_insert(0) += count;
        }
    }

    pub fn multiplicity(&self, r: &Ranking) -> usize {
        self.counts.get(r).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Ranking, usize)> {
        self.counts.iter().map(|(r, &c)| (r, c))
    }

    /// One ranking per voter, in ranking order.
    pub fn to_rankings(&self) -> Vec<Ranking> {
        self.iter()
            .flat_map(|(r, c)| std::iter::repeat_n(r.clone(), c))
            .collect()
    }
}

/// Whether each voter `i` can be given a ranking of `target` within
/// distance `deltas[i]` of its own ballot, using each target ranking as
/// often as its multiplicity.
pub fn feasible_assignment(profile: &Profile, deltas: &[usize], target: &AnonymousProfile) -> bool {
    let n = profile.n();
    if target.total() != n || deltas.len() != n {
        return false;
    }
    let targets: Vec<(&Ranking, usize)> = target.iter().collect();
    // 0 = source, 1 = sink, 2.. voters, then targets.
    let mut g = FlowNetwork::new(2 + n + targets.len());
    for (i, (r, &d)) in profile.rankings().iter().zip(deltas).enumerate() {
        g.add_arc(0, 2 + i, 1).expect("valid node");
        for (j, (t, _)) in targets.iter().enumerate() {
            if crate::model::kendall_tau(r, t).is_ok_and(|dist| dist <= d) {
                g.add_arc(2 + i, 2 + n + j, 1).expect("valid node");
            }
        }
    }
    for (j, (_, count)) in targets.iter().enumerate() {
        g.add_arc(2 + n + j, 1, *count as u64).expect("valid node");
    }
    g.max_flow(0, 1).expect("distinct terminals").value == n as u64
}

/// Limits for [`decide_exhaustive`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExhaustiveBudget {
    /// Upper bound on manipulator profiles × adversary profiles.
    pub max_nodes: u128,
}

impl Default for ExhaustiveBudget {
    fn default() -> Self {
        ExhaustiveBudget {
            max_nodes: 200_000_000,
        }
    }
}

/// Candidate ballots for one manipulator. For monotone rules moving `c` to
/// the top never hurts it, so only `c`-first ballots are needed.
fn manipulator_ballots(inst: &Instance) -> Vec<Ranking> {
    let m = inst.m();
    let c = inst.c();
    if inst.rule().is_monotone() {
        let others: Vec<usize> = (0..m).filter(|&x| x != c.0).collect();
        others
            .iter()
            .copied()
            .permutations(others.len())
            .map(|rest| {
                let mut order = vec![c.0];
                order.extend(rest);
                Ranking::from_indices(&order).expect("a permutation")
            })
            .collect()
    } else {
        (0..m)
            .permutations(m)
            .map(|p| Ranking::from_indices(&p).expect("a permutation"))
            .collect()
    }
}

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n.saturating_sub(k));
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// Multisets of size `len` drawn from `0..pool`.
fn multiset_count(pool: usize, len: usize) -> u128 {
    if pool == 0 {
        return u128::from(len == 0);
    }
    binomial((pool + len - 1) as u128, len as u128)
}

/// Walks the product of balls in lexicographic order, returning the first
/// profile `Q` for which `c` is not a co-winner of `Q ∪ extra`.
struct AdversarySearch<'a> {
    inst: &'a Instance,
    balls: Vec<KTBall>,
    eval: Evaluator,
    // Defeating profiles found so far, tried first for later ballots.
    known: Vec<Vec<usize>>,
}

impl<'a> AdversarySearch<'a> {
    fn new(inst: &'a Instance) -> Result<Self> {
        let balls = inst
            .profile()
            .rankings()
            .iter()
            .zip(inst.deltas())
            .map(|(r, &d)| kt_ball(r, d))
            .collect();
        Ok(AdversarySearch {
            inst,
            balls,
            eval: Evaluator::new(inst.rule(), inst.m())?,
            known: Vec::new(),
        })
    }

    fn product_size(&self) -> u128 {
        self.balls
            .iter()
            .fold(1u128, |acc, b| acc.saturating_mul(b.len() as u128))
    }

    fn loses<'b>(&'b self, idx: &[usize], extra: &'b [Ranking], ballots: &mut Vec<&'b Ranking>) -> bool {
        ballots.clear();
        ballots.extend(idx.iter().zip(&self.balls).map(|(&i, b)| &b.members[i]));
        ballots.extend(extra.iter());
        !self.eval.cowins(ballots, self.inst.c())
    }

    fn find(&mut self, extra: &[Ranking]) -> Option<Vec<Ranking>> {
        let n = self.balls.len();
        let hit = {
            let mut ballots: Vec<&Ranking> = Vec::with_capacity(n + extra.len());
            if let Some(idx) = self.known.iter().find(|idx| self.loses(idx, extra, &mut ballots)) {
                return Some(self.materialize(idx));
            }
            let mut idx = vec![0usize; n];
            'outer: loop {
                if self.loses(&idx, extra, &mut ballots) {
                    break Some(idx);
                }
                // Odometer step, last voter fastest.
                let mut i = n;
                loop {
                    if i == 0 {
                        break 'outer None;
                    }
                    i -= 1;
                    idx[i] += 1;
                    if idx[i] < self.balls[i].len() {
                        break;
                    }
                    idx[i] = 0;
                }
            }
        };
        hit.map(|idx| {
            let q = self.materialize(&idx);
            self.known.push(idx);
            q
        })
    }

    fn materialize(&self, idx: &[usize]) -> Vec<Ranking> {
        idx.iter()
            .zip(&self.balls)
            .map(|(&i, b)| b.members[i].clone())
            .collect()
    }
}

/// A profile inside the voters' balls under which `c` does not co-win
/// together with `manipulators`, or `None` if there is none.
pub fn find_defeating_profile(
    inst: &Instance,
    manipulators: &[Ranking],
    budget: ExhaustiveBudget,
) -> Result<Option<Vec<Ranking>>> {
    if manipulators.len() != inst.manipulators() || manipulators.iter().any(|r| r.m() != inst.m())
    {
        return Err(Error::invalid(format!(
            "expected {} manipulator ballots over {} alternatives",
            inst.manipulators(),
            inst.m()
        )));
    }
    let mut search = AdversarySearch::new(inst)?;
    let size = search.product_size();
    if size > budget.max_nodes {
        return Err(Error::BudgetExceeded {
            what: "adversary enumeration",
            required: size,
            limit: budget.max_nodes,
        });
    }
    Ok(search.find(manipulators))
}

/// Exact Stable Manipulation by exhaustive search over manipulator
/// multisets and the product of the voters' Kendall-Tau balls.
pub fn decide_exhaustive(inst: &Instance, budget: ExhaustiveBudget) -> Result<Decision> {
    let ballots = manipulator_ballots(inst);
    let l = inst.manipulators();
    let mut search = AdversarySearch::new(inst)?;
    let nodes = multiset_count(ballots.len(), l).saturating_mul(search.product_size());
    if nodes > budget.max_nodes {
        return Err(Error::BudgetExceeded {
            what: "exhaustive search",
            required: nodes,
            limit: budget.max_nodes,
        });
    }
    let mut last = None;
    for pick in (0..ballots.len()).combinations_with_replacement(l) {
        let w: Vec<Ranking> = pick.iter().map(|&i| ballots[i].clone()).collect();
        match search.find(&w) {
            None => return Ok(Decision::Yes { witness: w }),
            Some(q) => {
                last = Some(Refutation {
                    manipulators: w,
                    adversary: q,
                })
            }
        }
    }
    Ok(Decision::No { refutation: last })
}

/// Limits for [`decide_anonymous`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AnonymousBudget {
    pub max_m: usize,
    /// Upper bound on manipulator multisets × candidate adversary profiles.
    pub max_profiles: u128,
}

impl Default for AnonymousBudget {
    fn default() -> Self {
        AnonymousBudget {
            max_m: 3,
            max_profiles: 5_000_000,
        }
    }
}

/// Exact Stable Manipulation over anonymous profiles, for small `m`.
///
/// Adversary profiles are multisets of size `n` over the union of the
/// voters' balls that admit an assignment of voters to rankings within
/// budget. The manipulators may cast any multiset of `ℓ` rankings.
pub fn decide_anonymous(inst: &Instance, budget: AnonymousBudget) -> Result<Decision> {
    let m = inst.m();
    if m > budget.max_m {
        return Err(Error::BudgetExceeded {
            what: "anonymous enumeration (alternatives)",
            required: m as u128,
            limit: budget.max_m as u128,
        });
    }
    let n = inst.n();
    let l = inst.manipulators();
    let all: Vec<Ranking> = (0..m)
        .permutations(m)
        .map(|p| Ranking::from_indices(&p).expect("a permutation"))
        .collect();
    let reachable: Vec<Ranking> = inst
        .profile()
        .rankings()
        .iter()
        .zip(inst.deltas())
        .flat_map(|(r, &d)| kt_ball(r, d).members)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let total = multiset_count(all.len(), l).saturating_mul(multiset_count(reachable.len(), n));
    if total > budget.max_profiles {
        return Err(Error::BudgetExceeded {
            what: "anonymous enumeration",
            required: total,
            limit: budget.max_profiles,
        });
    }
    let adversary: Vec<Vec<Ranking>> = (0..reachable.len())
        .combinations_with_replacement(n)
        .filter_map(|pick| {
            let target = AnonymousProfile::from_rankings(pick.iter().map(|&i| &reachable[i]));
            feasible_assignment(inst.profile(), inst.deltas(), &target)
                .then(|| target.to_rankings())
        })
        .collect();
    let eval = Evaluator::new(inst.rule(), m)?;
    let c = inst.c();
    let mut last = None;
    for pick in (0..all.len()).combinations_with_replacement(l) {
        let w: Vec<Ranking> = pick.iter().map(|&i| all[i].clone()).collect();
        let defeat = adversary.iter().find(|q| {
            let ballots: Vec<&Ranking> = q.iter().chain(&w).collect();
            !eval.cowins(&ballots, c)
        });
        match defeat {
            None => return Ok(Decision::Yes { witness: w }),
            Some(q) => {
                last = Some(Refutation {
                    manipulators: w,
                    adversary: q.clone(),
                })
            }
        }
    }
    Ok(Decision::No { refutation: last })
}

/// Checks a NO certificate: every adversary ballot is within its voter's
/// budget and `c` does not co-win.
pub fn validate_refutation(inst: &Instance, refutation: &Refutation) -> Result<bool> {
    let within = refutation.adversary.len() == inst.n()
        && inst
            .profile()
            .rankings()
            .iter()
            .zip(&refutation.adversary)
            .zip(inst.deltas())
            .all(|((r, q), &d)| crate::model::kendall_tau(r, q).is_ok_and(|x| x <= d));
    if !within {
        return Ok(false);
    }
    let eval = Evaluator::new(inst.rule(), inst.m())?;
    let ballots: Vec<&Ranking> = refutation
        .adversary
        .iter()
        .chain(&refutation.manipulators)
        .collect();
    Ok(!eval.cowins(&ballots, inst.c()))
}

/// Whether `c` co-wins with `ballots` added to the believed profile.
pub fn cowins_unperturbed(inst: &Instance, ballots: &[Ranking]) -> Result<bool> {
    let eval = Evaluator::new(inst.rule(), inst.m())?;
    Ok(eval.cowins(&inst.ballots_with(ballots), inst.c()))
}
