use super::{greedy_decision, require_single_manipulator, Decision, SafetyCheck};
use crate::error::Result;
use crate::model::{Alternative, Instance, Ranking};
use crate::perturbation::cost_place_after;

/// Safety for maximin with one manipulator.
///
/// For every pair `(a, b)` the adversary profile `Q^a_b` pushes `c` just
/// behind `b` wherever the budget allows and spends what is left pulling
/// `a` forward (or only pulls `a` forward when `c` cannot get behind `b`,
/// or when `b = a`).
/// The pairwise margins of `a` and the margin `D(c, b)` in each `Q^a_b`
/// do not depend on the manipulator, so they are computed once.
#[derive(Debug, Clone)]
pub struct MaximinSafety<'a> {
    inst: &'a Instance,
    // a_margins[a * m + b][y] = D_{Q^a_b}(a, y)
    a_margins: Vec<Vec<i64>>,
    // c_margin[a * m + b] = D_{Q^a_b}(c, b)
    c_margin: Vec<i64>,
}

impl<'a> MaximinSafety<'a> {
    pub fn new(inst: &'a Instance) -> Self {
        let m = inst.m();
        let c = inst.c();
        let mut a_margins = vec![Vec::new(); m * m];
        let mut c_margin = vec![0i64; m * m];
        for a in others(m, c) {
            for b in others(m, c) {
                let mut dm = vec![0i64; m];
                let mut dc = 0i64;
                for q in worst_profile(inst, a, b) {
                    for y in (0..m).map(Alternative).filter(|&y| y != a) {
                        dm[y.0] += if q.prefers(a, y) { 1 } else { -1 };
                    }
                    dc += if q.prefers(c, b) { 1 } else { -1 };
                }
                a_margins[a.0 * m + b.0] = dm;
                c_margin[a.0 * m + b.0] = dc;
            }
        }
        MaximinSafety {
            inst,
            a_margins,
            c_margin,
        }
    }
}

fn others(m: usize, c: Alternative) -> impl Iterator<Item = Alternative> {
    (0..m).map(Alternative).filter(move |&x| x != c)
}

/// `Q^a_b`: the perturbation of the believed profile that is worst for `c`
/// against `a` when `b` is `c`'s weakest pairing.
pub(crate) fn worst_profile(inst: &Instance, a: Alternative, b: Alternative) -> Vec<Ranking> {
    let c = inst.c();
    inst.profile()
        .rankings()
        .iter()
        .zip(inst.deltas())
        .map(|(r, &delta)| {
            let j = cost_place_after(r, c, b);
            // For b = a, pulling a left is never worse: it puts c behind a
            // whenever pushing c could, and a overtakes more alternatives.
            if j <= delta && b != a {
                let mut q = r.shift_right(c, j);
                q.shift_left_in_place(a, delta - j);
                q
            } else {
                r.shift_left(a, delta)
            }
        })
        .collect()
}

impl SafetyCheck for MaximinSafety<'_> {
    fn instance(&self) -> &Instance {
        self.inst
    }

    fn is_safe(&self, a: Alternative, _t: usize, above: &[Alternative]) -> bool {
        let m = self.inst.m();
        let c = self.inst.c();
        let mut ahead = vec![false; m];
        for x in above {
            ahead[x.0] = true;
        }
        // The manipulator ranks c first, adding one to every D(c, b); it
        // ranks a below exactly the alternatives in `above`.
        others(m, c).all(|b| {
            let row = &self.a_margins[a.0 * m + b.0];
            let a_score = (0..m)
                .filter(|&y| y != a.0)
                .map(|y| row[y] + if ahead[y] { -1 } else { 1 })
                .min()
                .expect("m ≥ 2");
            a_score <= self.c_margin[a.0 * m + b.0] + 1
        })
    }
}

/// Single-manipulator decider for maximin.
pub fn decide_maximin(inst: &Instance) -> Result<Decision> {
    require_single_manipulator(inst, "maximin")?;
    if inst.m() == 1 {
        return Ok(Decision::Yes {
            witness: vec![Ranking::identity(1)],
        });
    }
    Ok(greedy_decision(&MaximinSafety::new(inst)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Profile;
    use crate::rules::{Evaluator, Rule};
    use itertools::Itertools;

    #[test]
    fn single_voter_with_one_swap() {
        // P = {(c, a, b)}, δ = 1
        let p = Profile::from_indices(&[&[2, 0, 1]]).unwrap();
        let i = Instance::new(p, Alternative(2), vec![1], 1, Rule::Maximin).unwrap();
        assert!(decide_maximin(&i).unwrap().is_yes());
    }

    #[test]
    fn zero_budget_matches_classical_manipulation() {
        let all: Vec<Ranking> = (0..3)
            .permutations(3)
            .map(|p| Ranking::from_indices(&p).unwrap())
            .collect();
        let ev = Evaluator::new(&Rule::Maximin, 3).unwrap();
        for picks in (0..all.len()).combinations_with_replacement(2) {
            let p = Profile::new(picks.iter().map(|&i| all[i].clone()).collect()).unwrap();
            for c in 0..3 {
                let i = Instance::new(p.clone(), Alternative(c), vec![0, 0], 1, Rule::Maximin).unwrap();
                let direct = all.iter().any(|w| {
                    let mut ballots = p.rankings().to_vec();
                    ballots.push(w.clone());
                    ev.cowins(&ballots, Alternative(c))
                });
                let d = decide_maximin(&i).unwrap();
                assert_eq!(d.is_yes(), direct, "{p:?} c={c}");
                if let Some(w) = d.witness() {
                    let mut ballots = p.rankings().to_vec();
                    ballots.push(w[0].clone());
                    assert!(ev.cowins(&ballots, Alternative(c)));
                }
            }
        }
    }

    #[test]
    fn pulling_a_beats_pushing_c_when_b_is_a() {
        // (c, 1, 0, 2) with δ = 2 becomes (0, c, 1, 2): 0 now beats c and 1.
        // Pushing c behind 0 instead leaves 0 behind 1.
        let p = Profile::from_indices(&[&[3, 1, 0, 2], &[0, 2, 3, 1]]).unwrap();
        let i = Instance::new(p, Alternative(3), vec![2, 0], 1, Rule::Maximin).unwrap();
        let q = worst_profile(&i, Alternative(0), Alternative(0));
        assert_eq!(q[0], Ranking::from_indices(&[0, 3, 1, 2]).unwrap());
        assert!(!decide_maximin(&i).unwrap().is_yes());
    }

    #[test]
    fn worst_profile_respects_budgets() {
        let p = Profile::from_indices(&[&[2, 0, 1, 3], &[1, 3, 0, 2], &[3, 2, 1, 0]]).unwrap();
        let i = Instance::new(p.clone(), Alternative(2), vec![2, 1, 3], 1, Rule::Maximin).unwrap();
        for (a, b) in [(0, 1), (1, 1), (3, 0)] {
            let q = worst_profile(&i, Alternative(a), Alternative(b));
            for ((orig, pert), &d) in p.rankings().iter().zip(&q).zip(i.deltas()) {
                assert!(crate::model::kendall_tau(orig, pert).unwrap() <= d);
            }
        }
    }
}
