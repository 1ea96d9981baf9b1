//! Alternatives, rankings, profiles and the Kendall-Tau arithmetic the
//! deciders are built on.
//!
//! Positions are 1-indexed (the leftmost, most preferred alternative sits
//! at position 1); alternative ids are 0-indexed.

use std::borrow::Borrow;
use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::rules::Rule;

/// Index of an alternative inside one election, in `0..m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Alternative(pub usize);

impl Alternative {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for Alternative {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Display labels for the alternatives of one election.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlternativeSet {
    labels: Vec<String>,
    by_label: HashMap<String, Alternative>,
}

impl AlternativeSet {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let mut by_label = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if l.is_empty() {
                return Err(Error::invalid("empty alternative label"));
            }
            if by_label.insert(l.clone(), Alternative(i)).is_some() {
                return Err(Error::invalid(format!("duplicate alternative label `{l}`")));
            }
        }
        Ok(AlternativeSet { labels, by_label })
    }

    /// Labels `a`, `b`, ... (then `a1`, `b1`, ... past `z`).
    pub fn lettered(m: usize) -> Self {
        let labels = (0..m).map(|i| {
            let letter = char::from(b'a' + (i % 26) as u8);
            match i / 26 {
                0 => letter.to_string(),
                r => format!("{letter}{r}"),
            }
        });
        AlternativeSet::new(labels).expect("generated labels are unique")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, a: Alternative) -> &str {
        &self.labels[a.0]
    }

    pub fn lookup(&self, label: &str) -> Option<Alternative> {
        self.by_label.get(label).copied()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn format_ranking(&self, r: &Ranking) -> String {
        r.order()
            .iter()
            .map(|&a| self.label(a))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// A strict total order over `m` alternatives, most preferred first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ranking {
    order: Vec<Alternative>,
    // 0-based slot of each alternative id.
    slot: Vec<usize>,
}

impl Ranking {
    pub fn new(order: Vec<Alternative>) -> Result<Self> {
        let m = order.len();
        let mut slot = vec![usize::MAX; m];
        for (i, a) in order.iter().enumerate() {
            if a.0 >= m {
                return Err(Error::invalid(format!(
                    "alternative {} out of range for m = {m}",
                    a.0
                )));
            }
            if slot[a.0] != usize::MAX {
                return Err(Error::invalid(format!("alternative {} repeated", a.0)));
            }
            slot[a.0] = i;
        }
        Ok(Ranking { order, slot })
    }

    pub fn from_indices(order: &[usize]) -> Result<Self> {
        Ranking::new(order.iter().copied().map(Alternative).collect())
    }

    /// `0 ≻ 1 ≻ … ≻ m-1`.
    pub fn identity(m: usize) -> Self {
        Ranking {
            order: (0..m).map(Alternative).collect(),
            slot: (0..m).collect(),
        }
    }

    pub fn m(&self) -> usize {
        self.order.len()
    }

    pub fn order(&self) -> &[Alternative] {
        &self.order
    }

    /// Alternative at 1-indexed `position`.
    pub fn at(&self, position: usize) -> Alternative {
        self.order[position - 1]
    }

    /// 1-indexed position of `a`; panics if `a` is out of range.
    #[inline]
    pub fn pos(&self, a: Alternative) -> usize {
        self.slot[a.0] + 1
    }

    /// Checked form of [`Ranking::pos`].
    pub fn rank(&self, a: Alternative) -> Result<usize> {
        self.slot
            .get(a.0)
            .map(|s| s + 1)
            .ok_or_else(|| Error::invalid(format!("alternative {} out of range", a.0)))
    }

    #[inline]
    pub fn prefers(&self, x: Alternative, y: Alternative) -> bool {
        self.slot[x.0] < self.slot[y.0]
    }

    /// Moves `a` right by `min(k, m - rank(a))` positions (RS).
    pub fn shift_right(&self, a: Alternative, k: usize) -> Ranking {
        let mut out = self.clone();
        out.shift_right_in_place(a, k);
        out
    }

    /// Moves `a` left by `min(k, rank(a) - 1)` positions (LS).
    pub fn shift_left(&self, a: Alternative, k: usize) -> Ranking {
        let mut out = self.clone();
        out.shift_left_in_place(a, k);
        out
    }

    pub fn shift_right_in_place(&mut self, a: Alternative, k: usize) {
        let from = self.slot[a.0];
        let to = (from + k).min(self.m() - 1);
        self.order[from..=to].rotate_left(1);
        self.refresh_slots(from, to);
    }

    pub fn shift_left_in_place(&mut self, a: Alternative, k: usize) {
        let from = self.slot[a.0];
        let to = from.saturating_sub(k);
        self.order[to..=from].rotate_right(1);
        self.refresh_slots(to, from);
    }

    /// Swaps the alternatives at 0-based slots `i` and `i + 1`.
    pub fn swap_adjacent(&mut self, i: usize) {
        self.order.swap(i, i + 1);
        self.refresh_slots(i, i + 1);
    }

    fn refresh_slots(&mut self, lo: usize, hi: usize) {
        for i in lo..=hi {
            self.slot[self.order[i].0] = i;
        }
    }
}

impl fmt::Display for Ranking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.order.iter().enumerate() {
            if i > 0 {
                f.write_str(" > ")?;
            }
            write!(f, "{}", a.0)?;
        }
        Ok(())
    }
}

/// Number of pairs ordered differently by `r1` and `r2`, equivalently the
/// minimum number of adjacent swaps turning one into the other.
pub fn kendall_tau(r1: &Ranking, r2: &Ranking) -> Result<usize> {
    let m = r1.m();
    if r2.m() != m {
        return Err(Error::invalid(format!(
            "rankings over different alternative sets ({m} vs {})",
            r2.m()
        )));
    }
    // Inversions of r2 read through r1's positions, counted with a Fenwick tree.
    let mut tree = vec![0usize; m + 1];
    let mut inversions = 0;
    for (seen, a) in r2.order().iter().enumerate() {
        let p = r1.pos(*a);
        let mut i = p;
        let mut not_greater = 0;
        while i > 0 {
            not_greater += tree[i];
            i &= i - 1;
        }
        inversions += seen - not_greater;
        let mut i = p;
        while i <= m {
            tree[i] += 1;
            i += i & i.wrapping_neg();
        }
    }
    Ok(inversions)
}

/// Largest possible Kendall-Tau distance over `m` alternatives.
pub fn max_kendall_tau(m: usize) -> usize {
    m * m.saturating_sub(1) / 2
}

/// An ordered sequence of `n ≥ 1` rankings over the same `m` alternatives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Profile {
    m: usize,
    rankings: Vec<Ranking>,
}

impl Profile {
    pub fn new(rankings: Vec<Ranking>) -> Result<Self> {
        let first = rankings
            .first()
            .ok_or_else(|| Error::invalid("a profile needs at least one ranking"))?;
        let m = first.m();
        if m == 0 {
            return Err(Error::invalid("a profile needs at least one alternative"));
        }
        if let Some(i) = rankings.iter().position(|r| r.m() != m) {
            return Err(Error::invalid(format!(
                "ranking {} has {} alternatives, expected {m}",
                i + 1,
                rankings[i].m()
            )));
        }
        Ok(Profile { m, rankings })
    }

    pub fn from_indices(rows: &[&[usize]]) -> Result<Self> {
        Profile::new(
            rows.iter()
                .map(|r| Ranking::from_indices(r))
                .collect::<Result<_>>()?,
        )
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.rankings.len()
    }

    pub fn rankings(&self) -> &[Ranking] {
        &self.rankings
    }

    pub fn into_rankings(self) -> Vec<Ranking> {
        self.rankings
    }

    pub fn margin(&self, x: Alternative, y: Alternative) -> Result<i64> {
        margin(&self.rankings, x, y)
    }
}

/// `D(x, y) = |{i : x ≻_i y}| - |{i : y ≻_i x}|`.
pub fn margin<R: Borrow<Ranking>>(ballots: &[R], x: Alternative, y: Alternative) -> Result<i64> {
    if x == y {
        return Err(Error::invalid("margin of an alternative against itself"));
    }
    let m = ballots.first().map_or(0, |r| r.borrow().m());
    if x.0 >= m || y.0 >= m {
        return Err(Error::invalid("alternative out of range"));
    }
    Ok(ballots
        .iter()
        .map(|r| if r.borrow().prefers(x, y) { 1 } else { -1 })
        .sum())
}

/// One Stable Manipulation instance: believed ballots, per-voter swap
/// budgets, the manipulators' favourite `c`, and how many manipulators vote.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    profile: Profile,
    c: Alternative,
    deltas: Vec<usize>,
    manipulators: usize,
    rule: Rule,
}

impl Instance {
    pub fn new(
        profile: Profile,
        c: Alternative,
        deltas: Vec<usize>,
        manipulators: usize,
        rule: Rule,
    ) -> Result<Self> {
        let m = profile.m();
        if c.0 >= m {
            return Err(Error::invalid(format!(
                "distinguished alternative {} out of range for m = {m}",
                c.0
            )));
        }
        if deltas.len() != profile.n() {
            return Err(Error::invalid(format!(
                "{} swap budgets given for {} voters",
                deltas.len(),
                profile.n()
            )));
        }
        let cap = max_kendall_tau(m);
        if let Some(i) = deltas.iter().position(|&d| d > cap) {
            return Err(Error::invalid(format!(
                "voter {} has budget {} > m(m-1)/2 = {cap}",
                i + 1,
                deltas[i]
            )));
        }
        if manipulators == 0 {
            return Err(Error::invalid("at least one manipulator is required"));
        }
        rule.validate(m)?;
        Ok(Instance {
            profile,
            c,
            deltas,
            manipulators,
            rule,
        })
    }

    /// Same budget `delta` for every voter.
    pub fn uniform(
        profile: Profile,
        c: Alternative,
        delta: usize,
        manipulators: usize,
        rule: Rule,
    ) -> Result<Self> {
        let n = profile.n();
        Instance::new(profile, c, vec![delta; n], manipulators, rule)
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    pub fn m(&self) -> usize {
        self.profile.m()
    }

    pub fn n(&self) -> usize {
        self.profile.n()
    }

    pub fn c(&self) -> Alternative {
        self.c
    }

    pub fn deltas(&self) -> &[usize] {
        &self.deltas
    }

    pub fn manipulators(&self) -> usize {
        self.manipulators
    }

    pub fn rule(&self) -> &Rule {
        &self.rule
    }

    pub fn with_rule(&self, rule: Rule) -> Result<Instance> {
        rule.validate(self.m())?;
        Ok(Instance {
            rule,
            ..self.clone()
        })
    }

    pub fn with_deltas(&self, deltas: Vec<usize>) -> Result<Instance> {
        Instance::new(
            self.profile.clone(),
            self.c,
            deltas,
            self.manipulators,
            self.rule.clone(),
        )
    }

    pub(crate) fn ballots_with(&self, extra: &[Ranking]) -> Vec<Ranking> {
        let mut all = self.profile.rankings().to_vec();
        all.extend_from_slice(extra);
        all
    }
}
