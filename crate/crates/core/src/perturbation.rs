//! Minimum-swap costs for the handful of targets the deciders care about,
//! and the per-ballot classifications built on them.
//!
//! Every cost here is a closed form; `tests::bfs_*` checks each of them
//! against breadth-first search over adjacent transpositions.

use std::fmt;

use crate::model::{Alternative, Ranking};
use crate::rules::ScoringVector;

/// Swaps needed so that `x` ends up outside the first `k` positions, or
/// `None` when `k ≥ m` (nothing can leave the top `m`).
pub fn cost_push_out_topk(r: &Ranking, x: Alternative, k: usize) -> Option<usize> {
    if k >= r.m() {
        return None;
    }
    Some((k + 1).saturating_sub(r.pos(x)))
}

/// Swaps needed so that `x` ends up within the first `k` positions, or
/// `None` when `k = 0`.
pub fn cost_pull_into_topk(r: &Ranking, x: Alternative, k: usize) -> Option<usize> {
    if k == 0 {
        return None;
    }
    Some(r.pos(x).saturating_sub(k))
}

/// Swaps needed to have `c` outside and `a` inside the first `k` positions
/// at the same time. When both moves are needed the swap of `c` with `a`
/// serves both, giving `rank(a) - rank(c)`.
pub fn cost_push_and_pull(r: &Ranking, c: Alternative, a: Alternative, k: usize) -> Option<usize> {
    debug_assert_ne!(c, a);
    if k == 0 || k >= r.m() {
        return None;
    }
    let (pc, pa) = (r.pos(c), r.pos(a));
    Some(match (pc > k, pa <= k) {
        (true, true) => 0,
        (true, false) => pa - k,
        (false, true) => k + 1 - pc,
        (false, false) => pa - pc,
    })
}

/// Swaps needed to place `c` somewhere after `b`.
pub fn cost_place_after(r: &Ranking, c: Alternative, b: Alternative) -> usize {
    r.pos(b).saturating_sub(r.pos(c))
}

/// Swaps needed to reach any ranking with `c` at a position in `c_at` and
/// `a` at a position in `a_at` (both 1-indexed, inclusive), or `None` if no
/// such ranking exists.
///
/// The cheapest target keeps every other alternative in its original
/// relative order, so its distance is the change in how many "others"
/// precede `c`, plus the same for `a`, plus one if `c` and `a` trade places.
pub fn cost_place_pair(
    r: &Ranking,
    c: Alternative,
    c_at: (usize, usize),
    a: Alternative,
    a_at: (usize, usize),
) -> Option<usize> {
    debug_assert_ne!(c, a);
    let (pc, pa) = (r.pos(c), r.pos(a));
    let others_before = |own: usize, other: usize| own - 1 - usize::from(other < own);
    let (oc, oa) = (others_before(pc, pa), others_before(pa, pc));
    let mut best: Option<usize> = None;
    for qc in c_at.0.max(1)..=c_at.1.min(r.m()) {
        for qa in a_at.0.max(1)..=a_at.1.min(r.m()) {
            if qc == qa {
                continue;
            }
            let cost = oc.abs_diff(others_before(qc, qa))
                + oa.abs_diff(others_before(qa, qc))
                + usize::from((pc < pa) != (qc < qa));
            best = Some(best.map_or(cost, |b| b.min(cost)));
        }
    }
    best
}

/// Largest score swing `[drop of c] + [gain of a]` obtainable by first
/// pushing `c` right by `j` and then pulling `a` left by `delta - j`, over
/// all `j ∈ 0..=delta`, together with the ranking realising it (smallest
/// maximising `j`).
pub fn worst_delta_scoring(
    r: &Ranking,
    c: Alternative,
    a: Alternative,
    delta: usize,
    s: &ScoringVector,
) -> (i64, Ranking) {
    debug_assert_ne!(c, a);
    let base = s.at(r.pos(c)) - s.at(r.pos(a));
    let mut best: Option<(i64, Ranking)> = None;
    // Beyond m - rank(c) further right shifts are clamped no-ops.
    let max_j = delta.min(r.m() - r.pos(c));
    for j in 0..=max_j {
        let mut q = r.shift_right(c, j);
        q.shift_left_in_place(a, delta - j);
        let swing = base - (s.at(q.pos(c)) - s.at(q.pos(a)));
        if best.as_ref().is_none_or(|(b, _)| swing > *b) {
            best = Some((swing, q));
        }
    }
    best.expect("j = 0 is always tried")
}

/// How a ballot can be perturbed with respect to `c` leaving and `a`
/// entering the first `k` positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KApprovalType {
    /// Both moves at once.
    Both,
    /// Only `c` can be pushed out.
    COutOnly,
    /// Only `a` can be pulled in.
    AInOnly,
    /// Each move alone, never both.
    Either,
    /// Neither move.
    Neither,
}

pub fn classify_kapproval(
    r: &Ranking,
    delta: usize,
    c: Alternative,
    a: Alternative,
    k: usize,
) -> KApprovalType {
    let within = |cost: Option<usize>| cost.is_some_and(|x| x <= delta);
    if within(cost_push_and_pull(r, c, a, k)) {
        return KApprovalType::Both;
    }
    match (
        within(cost_push_out_topk(r, c, k)),
        within(cost_pull_into_topk(r, a, k)),
    ) {
        (true, true) => KApprovalType::Either,
        (true, false) => KApprovalType::COutOnly,
        (false, true) => KApprovalType::AInOnly,
        (false, false) => KApprovalType::Neither,
    }
}

/// Subset of the four Bucklin predicates relative to a prefix length `k`:
///
/// * `x1`: `c` is not in the top `k`
/// * `x2`: `c` is not in the top `k - 1`
/// * `x3`: `a` is in the top `k - 1`
/// * `x4`: `a` is in the top `k`
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BucklinType(u8);

impl BucklinType {
    pub const X1: u8 = 1;
    pub const X2: u8 = 2;
    pub const X3: u8 = 4;
    pub const X4: u8 = 8;

    pub fn from_bits(bits: u8) -> Self {
        BucklinType(bits & 0xF)
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn has(self, flag: u8) -> bool {
        self.0 & flag != 0
    }

    /// Prefix containment: `x1 ⇒ x2` and `x3 ⇒ x4`.
    pub fn is_consistent(self) -> bool {
        (!self.has(Self::X1) || self.has(Self::X2)) && (!self.has(Self::X3) || self.has(Self::X4))
    }

    /// The nine consistent subsets.
    pub fn consistent() -> impl Iterator<Item = BucklinType> {
        (0u8..16).map(BucklinType).filter(|t| t.is_consistent())
    }

    pub fn of(r: &Ranking, c: Alternative, a: Alternative, k: usize) -> Self {
        let (pc, pa) = (r.pos(c), r.pos(a));
        let mut bits = 0;
        if pc > k {
            bits |= Self::X1;
        }
        if pc + 1 > k {
            bits |= Self::X2;
        }
        if pa < k {
            bits |= Self::X3;
        }
        if pa <= k {
            bits |= Self::X4;
        }
        BucklinType(bits)
    }

    /// 1-indexed position intervals for `c` and `a` realising this type.
    fn position_windows(self, k: usize, m: usize) -> ((usize, usize), (usize, usize)) {
        let c_at = match (self.has(Self::X1), self.has(Self::X2)) {
            (true, _) => (k + 1, m),
            (false, true) => (k, k),
            (false, false) => (1, k.saturating_sub(1)),
        };
        let a_at = match (self.has(Self::X3), self.has(Self::X4)) {
            (true, _) => (1, k.saturating_sub(1)),
            (false, true) => (k, k),
            (false, false) => (k + 1, m),
        };
        (c_at, a_at)
    }
}

impl fmt::Debug for BucklinType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = [(Self::X1, "x1"), (Self::X2, "x2"), (Self::X3, "x3"), (Self::X4, "x4")]
            .iter()
            .filter(|(b, _)| self.has(*b))
            .map(|(_, n)| *n)
            .collect();
        write!(f, "{{{}}}", names.join(","))
    }
}

/// Set of [`BucklinType`]s a ballot can reach within its swap budget.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct BucklinMetaType(u16);

impl BucklinMetaType {
    pub fn insert(&mut self, t: BucklinType) {
        self.0 |= 1 << t.0;
    }

    pub fn contains(self, t: BucklinType) -> bool {
        self.0 & (1 << t.0) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: BucklinMetaType) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = BucklinType> {
        (0u8..16)
            .filter(move |&b| self.0 & (1 << b) != 0)
            .map(BucklinType)
    }
}

impl fmt::Debug for BucklinMetaType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Types reachable from `r` within `delta` swaps, for prefix length `k`.
pub fn bucklin_metatype(
    r: &Ranking,
    delta: usize,
    c: Alternative,
    a: Alternative,
    k: usize,
) -> BucklinMetaType {
    let m = r.m();
    let mut meta = BucklinMetaType::default();
    for t in BucklinType::consistent() {
        let (c_at, a_at) = t.position_windows(k, m);
        if cost_place_pair(r, c, c_at, a, a_at).is_some_and(|cost| cost <= delta) {
            meta.insert(t);
        }
    }
    meta
}
