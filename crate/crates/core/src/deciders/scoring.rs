use super::{greedy_decision, require_single_manipulator, Decision, SafetyCheck};
use crate::error::{Error, Result};
use crate::model::{Alternative, Instance, Ranking};
use crate::perturbation::worst_delta_scoring;
use crate::rules::ScoringVector;

/// Safety for positional scoring rules with one manipulator.
///
/// Each voter is perturbed independently in the way that hurts `c`
/// relative to `a` the most, so the worst-case gap `S(a) - S(c)` over all
/// perturbed profiles is a per-alternative constant. Position `t` is safe
/// for `a` iff that gap is at most `α_1 - α_t`.
#[derive(Debug, Clone)]
pub struct ScoringSafety<'a> {
    inst: &'a Instance,
    vector: ScoringVector,
    worst_gap: Vec<i64>,
}

impl<'a> ScoringSafety<'a> {
    pub fn new(inst: &'a Instance, vector: &ScoringVector) -> Result<Self> {
        let m = inst.m();
        if vector.len() != m {
            return Err(Error::invalid(format!(
                "scoring vector has {} entries but there are {m} alternatives",
                vector.len()
            )));
        }
        let c = inst.c();
        let mut worst_gap = vec![0i64; m];
        for (r, &delta) in inst.profile().rankings().iter().zip(inst.deltas()) {
            for a in (0..m).map(Alternative).filter(|&a| a != c) {
                let (swing, _) = worst_delta_scoring(r, c, a, delta, vector);
                worst_gap[a.0] += vector.at(r.pos(a)) - vector.at(r.pos(c)) + swing;
            }
        }
        Ok(ScoringSafety {
            inst,
            vector: vector.clone(),
            worst_gap,
        })
    }

    /// `max over perturbed Q of S(Q, a) - S(Q, c)`.
    pub fn worst_gap(&self, a: Alternative) -> i64 {
        self.worst_gap[a.0]
    }

    /// The profile realising [`ScoringSafety::worst_gap`] for `a`.
    pub fn worst_profile(&self, a: Alternative) -> Vec<Ranking> {
        let c = self.inst.c();
        self.inst
            .profile()
            .rankings()
            .iter()
            .zip(self.inst.deltas())
            .map(|(r, &d)| worst_delta_scoring(r, c, a, d, &self.vector).1)
            .collect()
    }
}

impl SafetyCheck for ScoringSafety<'_> {
    fn instance(&self) -> &Instance {
        self.inst
    }

    fn is_safe(&self, a: Alternative, t: usize, _above: &[Alternative]) -> bool {
        self.worst_gap[a.0] <= self.vector.at(1) - self.vector.at(t)
    }
}

/// Single-manipulator decider for any positional scoring rule.
pub fn decide_scoring(inst: &Instance, vector: &ScoringVector) -> Result<Decision> {
    require_single_manipulator(inst, "scoring-rule")?;
    if inst.m() == 1 {
        return Ok(Decision::Yes {
            witness: vec![Ranking::identity(1)],
        });
    }
    let safety = ScoringSafety::new(inst, vector)?;
    Ok(greedy_decision(&safety))
}
