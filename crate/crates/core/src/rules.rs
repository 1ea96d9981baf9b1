//! Winner determination for the positional, pairwise and round-based rules.
//!
//! Every rule is evaluated in the co-winner sense: [`Evaluator::winners`]
//! returns the full (non-empty) set of tied winners, except for STV which
//! breaks elimination ties towards the smallest alternative id and so has a
//! single winner.

use std::borrow::Borrow;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::{Alternative, Ranking};

/// Positional score vector `(α_1, …, α_m)`, non-increasing with `α_1 > α_m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ScoringVector(Vec<i64>);

impl ScoringVector {
    pub fn new(weights: Vec<i64>) -> Result<Self> {
        if weights.len() < 2 {
            return Err(Error::invalid("a scoring vector needs at least two entries"));
        }
        if weights.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::invalid(format!(
                "scoring vector {weights:?} is not non-increasing"
            )));
        }
        if weights[0] == weights[weights.len() - 1] {
            return Err(Error::invalid(format!(
                "scoring vector {weights:?} must have α_1 > α_m"
            )));
        }
        Ok(ScoringVector(weights))
    }

    pub fn plurality(m: usize) -> Result<Self> {
        Self::approval(m, 1)
    }

    pub fn veto(m: usize) -> Result<Self> {
        Self::approval(m, m.saturating_sub(1))
    }

    pub fn approval(m: usize, k: usize) -> Result<Self> {
        if k == 0 || k >= m {
            return Err(Error::invalid(format!(
                "k-approval needs 1 ≤ k ≤ m-1, got k = {k}, m = {m}"
            )));
        }
        Self::new((0..m).map(|i| i64::from(i < k)).collect())
    }

    pub fn borda(m: usize) -> Result<Self> {
        Self::new((0..m).rev().map(|i| i as i64).collect())
    }

    pub fn weights(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Score for the 1-indexed `position`.
    #[inline]
    pub fn at(&self, position: usize) -> i64 {
        self.0[position - 1]
    }
}

/// Copeland tie weight `α = num / den ∈ [0, 1]`, kept exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CopelandAlpha {
    num: u32,
    den: u32,
}

impl CopelandAlpha {
    pub const ZERO: CopelandAlpha = CopelandAlpha { num: 0, den: 1 };

    pub fn new(num: u32, den: u32) -> Result<Self> {
        if den == 0 || num > den {
            return Err(Error::invalid(format!(
                "Copeland α = {num}/{den} must lie in [0, 1]"
            )));
        }
        let g = gcd(num, den);
        Ok(CopelandAlpha {
            num: num / g,
            den: den / g,
        })
    }

    pub fn num(self) -> u32 {
        self.num
    }

    pub fn den(self) -> u32 {
        self.den
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a.max(1)
    } else {
        gcd(b, a % b)
    }
}

/// Voting rule identifier with its parameters.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Rule {
    Scoring(ScoringVector),
    KApproval(usize),
    Plurality,
    Veto,
    Borda,
    Maximin,
    Copeland(CopelandAlpha),
    Bucklin,
    SimplifiedBucklin,
    Stv,
}

impl Rule {
    /// Positional weights for the scoring family over `m` alternatives,
    /// `None` for rules that are not positional.
    pub fn scoring_vector(&self, m: usize) -> Result<Option<ScoringVector>> {
        let v = match self {
            Rule::Scoring(v) => {
                if v.len() != m {
                    return Err(Error::invalid(format!(
                        "scoring vector has {} entries but there are {m} alternatives",
                        v.len()
                    )));
                }
                v.clone()
            }
            Rule::KApproval(k) => ScoringVector::approval(m, *k)?,
            Rule::Plurality => ScoringVector::plurality(m)?,
            Rule::Veto => ScoringVector::veto(m)?,
            Rule::Borda => ScoringVector::borda(m)?,
            _ => return Ok(None),
        };
        Ok(Some(v))
    }

    /// The `k` of the k-approval family, if this rule is one.
    pub fn approval_k(&self, m: usize) -> Option<usize> {
        match self {
            Rule::KApproval(k) => Some(*k),
            Rule::Plurality => Some(1),
            Rule::Veto => Some(m.saturating_sub(1)),
            _ => None,
        }
    }

    pub fn validate(&self, m: usize) -> Result<()> {
        if m < 2 {
            // Every rule trivially elects the lone alternative.
            return Ok(());
        }
        self.scoring_vector(m).map(|_| ())
    }

    /// Raising `c` in a ballot can never cost `c` a co-win. Holds for every
    /// rule here except STV.
    pub fn is_monotone(&self) -> bool {
        !matches!(self, Rule::Stv)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Scoring(v) => {
                f.write_str("scoring:")?;
                for (i, w) in v.weights().iter().enumerate() {
                    if i > 0 {
                        f.write_str("-")?;
                    }
                    write!(f, "{w}")?;
                }
                Ok(())
            }
            Rule::KApproval(k) => write!(f, "k-approval:{k}"),
            Rule::Plurality => f.write_str("plurality"),
            Rule::Veto => f.write_str("veto"),
            Rule::Borda => f.write_str("borda"),
            Rule::Maximin => f.write_str("maximin"),
            Rule::Copeland(a) if *a == CopelandAlpha::ZERO => f.write_str("copeland"),
            Rule::Copeland(a) => write!(f, "copeland:{}/{}", a.num, a.den),
            Rule::Bucklin => f.write_str("bucklin"),
            Rule::SimplifiedBucklin => f.write_str("simplified-bucklin"),
            Rule::Stv => f.write_str("stv"),
        }
    }
}

impl FromStr for Rule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, param) = match s.split_once(':') {
            Some((n, p)) => (n, Some(p)),
            None => (s, None),
        };
        let bad = || Error::invalid(format!("cannot parse rule `{s}`"));
        let rule = match (name.to_ascii_lowercase().as_str(), param) {
            ("plurality", None) => Rule::Plurality,
            ("veto", None) => Rule::Veto,
            ("borda", None) => Rule::Borda,
            ("maximin", None) => Rule::Maximin,
            ("copeland", None) => Rule::Copeland(CopelandAlpha::ZERO),
            ("copeland", Some(p)) => {
                let (num, den) = match p.split_once('/') {
                    Some((a, b)) => (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?),
                    None => (p.parse().map_err(|_| bad())?, 1),
                };
                Rule::Copeland(CopelandAlpha::new(num, den)?)
            }
            ("bucklin", None) => Rule::Bucklin,
            ("simplified-bucklin", None) => Rule::SimplifiedBucklin,
            ("stv", None) => Rule::Stv,
            ("k-approval", Some(k)) => {
                let k: usize = k.parse().map_err(|_| bad())?;
                if k == 0 {
                    return Err(Error::invalid("k-approval needs k ≥ 1"));
                }
                Rule::KApproval(k)
            }
            ("scoring", Some(v)) => Rule::Scoring(ScoringVector::new(
                v.split('-')
                    .map(|w| w.trim().parse::<i64>().map_err(|_| bad()))
                    .collect::<Result<_>>()?,
            )?),
            _ => return Err(bad()),
        };
        Ok(rule)
    }
}

/// Per-alternative scores. Copeland^α scores are stored multiplied by the
/// denominator of α so every comparison stays in exact integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScoreTable {
    scaled: Vec<i64>,
    scale: i64,
}

impl ScoreTable {
    /// Scaled score of `a`; divide by [`ScoreTable::scale`] for the real value.
    pub fn scaled(&self, a: Alternative) -> i64 {
        self.scaled[a.0]
    }

    pub fn scale(&self) -> i64 {
        self.scale
    }

    pub fn value(&self, a: Alternative) -> f64 {
        self.scaled[a.0] as f64 / self.scale as f64
    }

    pub fn len(&self) -> usize {
        self.scaled.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scaled.is_empty()
    }

    pub fn winners(&self) -> Vec<Alternative> {
        argmax(&self.scaled)
    }
}

fn argmax(scores: &[i64]) -> Vec<Alternative> {
    let best = scores.iter().copied().max().unwrap_or(0);
    scores
        .iter()
        .enumerate()
        .filter(|(_, &s)| s == best)
        .map(|(i, _)| Alternative(i))
        .collect()
}

/// Number of ballots placing `a` within their first `k` positions.
pub fn top_k_count<R: Borrow<Ranking>>(ballots: &[R], a: Alternative, k: usize) -> Result<usize> {
    let m = ballots.first().map_or(0, |r| r.borrow().m());
    if k == 0 || k > m {
        return Err(Error::invalid(format!("k = {k} outside 1..={m}")));
    }
    if a.0 >= m {
        return Err(Error::invalid(format!("alternative {} out of range", a.0)));
    }
    Ok(ballots.iter().filter(|r| (*r).borrow().pos(a) <= k).count())
}

/// Score table for positional, maximin and Copeland rules.
pub fn score_table<R: Borrow<Ranking>>(ballots: &[R], rule: &Rule) -> Result<ScoreTable> {
    let m = ballots
        .first()
        .map(|r| r.borrow().m())
        .ok_or_else(|| Error::invalid("empty profile"))?;
    Evaluator::new(rule, m)?.score_table(ballots)
}

/// Winner set of `rule` on `ballots`, sorted by id.
pub fn winners<R: Borrow<Ranking>>(ballots: &[R], rule: &Rule) -> Result<Vec<Alternative>> {
    let m = ballots
        .first()
        .map(|r| r.borrow().m())
        .ok_or_else(|| Error::invalid("empty profile"))?;
    Ok(Evaluator::new(rule, m)?.winners(ballots))
}

#[derive(Debug, Clone)]
enum Kind {
    Positional(ScoringVector),
    Maximin,
    Copeland(CopelandAlpha),
    Bucklin,
    SimplifiedBucklin,
    Stv,
    Trivial,
}

/// A rule validated against a fixed number of alternatives; the hot path of
/// every oracle.
#[derive(Debug, Clone)]
pub struct Evaluator {
    m: usize,
    kind: Kind,
}

impl Evaluator {
    pub fn new(rule: &Rule, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::invalid("no alternatives"));
        }
        let kind = if m == 1 {
            Kind::Trivial
        } else if let Some(v) = rule.scoring_vector(m)? {
            Kind::Positional(v)
        } else {
            match rule {
                Rule::Maximin => Kind::Maximin,
                Rule::Copeland(a) => Kind::Copeland(*a),
                Rule::Bucklin => Kind::Bucklin,
                Rule::SimplifiedBucklin => Kind::SimplifiedBucklin,
                Rule::Stv => Kind::Stv,
                _ => unreachable!("positional rules handled above"),
            }
        };
        Ok(Evaluator { m, kind })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn score_table<R: Borrow<Ranking>>(&self, ballots: &[R]) -> Result<ScoreTable> {
        self.check(ballots)?;
        match &self.kind {
            Kind::Positional(v) => Ok(ScoreTable {
                scaled: self.positional(ballots, v),
                scale: 1,
            }),
            Kind::Maximin => Ok(ScoreTable {
                scaled: self.maximin(ballots),
                scale: 1,
            }),
            Kind::Copeland(alpha) => Ok(ScoreTable {
                scaled: self.copeland(ballots, *alpha),
                scale: i64::from(alpha.den),
            }),
            Kind::Trivial => Ok(ScoreTable {
                scaled: vec![0],
                scale: 1,
            }),
            _ => Err(Error::Unsupported(
                "Bucklin variants and STV have no score table".into(),
            )),
        }
    }

    fn check<R: Borrow<Ranking>>(&self, ballots: &[R]) -> Result<()> {
        if ballots.is_empty() {
            return Err(Error::invalid("empty profile"));
        }
        if ballots.iter().any(|r| r.borrow().m() != self.m) {
            return Err(Error::invalid("ballot over the wrong alternative set"));
        }
        Ok(())
    }

    /// Co-winners, sorted by id. `ballots` must be non-empty rankings over
    /// `m` alternatives.
    pub fn winners<R: Borrow<Ranking>>(&self, ballots: &[R]) -> Vec<Alternative> {
        debug_assert!(self.check(ballots).is_ok());
        match &self.kind {
            Kind::Trivial => vec![Alternative(0)],
            Kind::Positional(v) => argmax(&self.positional(ballots, v)),
            Kind::Maximin => argmax(&self.maximin(ballots)),
            Kind::Copeland(alpha) => argmax(&self.copeland(ballots, *alpha)),
            Kind::Bucklin => {
                let (_, counts) = self.bucklin_round(ballots);
                argmax(&counts)
            }
            Kind::SimplifiedBucklin => {
                let n = ballots.len() as i64;
                let (_, counts) = self.bucklin_round(ballots);
                counts
                    .iter()
                    .enumerate()
                    .filter(|(_, &s)| 2 * s > n)
                    .map(|(i, _)| Alternative(i))
                    .collect()
            }
            Kind::Stv => vec![self.stv(ballots)],
        }
    }

    pub fn cowins<R: Borrow<Ranking>>(&self, ballots: &[R], c: Alternative) -> bool {
        match &self.kind {
            Kind::Trivial => true,
            Kind::Positional(v) => {
                let s = self.positional(ballots, v);
                s.iter().all(|&x| x <= s[c.0])
            }
            Kind::Maximin => {
                let s = self.maximin(ballots);
                s.iter().all(|&x| x <= s[c.0])
            }
            Kind::Copeland(alpha) => {
                let s = self.copeland(ballots, *alpha);
                s.iter().all(|&x| x <= s[c.0])
            }
            Kind::Bucklin => {
                let (_, counts) = self.bucklin_round(ballots);
                counts.iter().all(|&x| x <= counts[c.0])
            }
            Kind::SimplifiedBucklin => {
                let (_, counts) = self.bucklin_round(ballots);
                2 * counts[c.0] > ballots.len() as i64
            }
            Kind::Stv => self.stv(ballots) == c,
        }
    }

    fn positional<R: Borrow<Ranking>>(&self, ballots: &[R], v: &ScoringVector) -> Vec<i64> {
        let w = v.weights();
        let mut s = vec![0i64; self.m];
        for r in ballots {
            for (i, a) in r.borrow().order().iter().enumerate() {
                s[a.0] += w[i];
            }
        }
        s
    }

    /// Pairwise margins `D[x][y]`, row-major.
    fn margins<R: Borrow<Ranking>>(&self, ballots: &[R]) -> Vec<i64> {
        let m = self.m;
        let mut d = vec![0i64; m * m];
        for r in ballots {
            let order = r.borrow().order();
            for i in 0..m {
                let x = order[i].0;
                for y in &order[i + 1..] {
                    d[x * m + y.0] += 1;
                    d[y.0 * m + x] -= 1;
                }
            }
        }
        d
    }

    fn maximin<R: Borrow<Ranking>>(&self, ballots: &[R]) -> Vec<i64> {
        let m = self.m;
        let d = self.margins(ballots);
        (0..m)
            .map(|x| {
                (0..m)
                    .filter(|&y| y != x)
                    .map(|y| d[x * m + y])
                    .min()
                    .unwrap_or(0)
            })
            .collect()
    }

    fn copeland<R: Borrow<Ranking>>(&self, ballots: &[R], alpha: CopelandAlpha) -> Vec<i64> {
        let m = self.m;
        let d = self.margins(ballots);
        let (num, den) = (i64::from(alpha.num), i64::from(alpha.den));
        (0..m)
            .map(|x| {
                (0..m)
                    .filter(|&y| y != x)
                    .map(|y| match d[x * m + y] {
                        v if v > 0 => den,
                        0 => num,
                        _ => 0,
                    })
                    .sum()
            })
            .collect()
    }

    /// First prefix length at which some alternative is ranked there by a
    /// strict majority, with the prefix counts at that length.
    fn bucklin_round<R: Borrow<Ranking>>(&self, ballots: &[R]) -> (usize, Vec<i64>) {
        let n = ballots.len() as i64;
        let mut counts = vec![0i64; self.m];
        for k in 1..=self.m {
            for r in ballots {
                counts[r.borrow().at(k).0] += 1;
            }
            if counts.iter().any(|&s| 2 * s > n) {
                return (k, counts);
            }
        }
        unreachable!("every alternative is in everybody's top m")
    }

    fn stv<R: Borrow<Ranking>>(&self, ballots: &[R]) -> Alternative {
        let m = self.m;
        let mut alive = vec![true; m];
        let mut tally = vec![0usize; m];
        for _ in 1..m {
            tally.iter_mut().for_each(|t| *t = 0);
            for r in ballots {
                if let Some(top) = r.borrow().order().iter().find(|a| alive[a.0]) {
                    tally[top.0] += 1;
                }
            }
            // Lowest plurality score goes, smallest id among ties.
            let out = (0..m)
                .filter(|&a| alive[a])
                .min_by_key(|&a| (tally[a], a))
                .expect("at least two alternatives remain");
            alive[out] = false;
        }
        Alternative(alive.iter().position(|&x| x).expect("one survivor"))
    }
}
