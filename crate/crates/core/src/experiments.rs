//! Monte-Carlo estimate of how often a uniformly random profile is stably
//! manipulable.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::deciders::{decide, has_polynomial_decider};
use crate::error::{Error, Result};
use crate::model::{max_kendall_tau, Alternative, Instance, Profile, Ranking};
use crate::oracle::{decide_exhaustive, ExhaustiveBudget};
use crate::rules::{Evaluator, Rule};

/// Description of the random stream behind every trial, for output headers.
pub const RNG_DESCRIPTION: &str =
    "ChaCha8Rng::seed_from_u64(seed) with stream = trial index; rankings by Fisher-Yates shuffle";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExperimentConfig {
    pub rule: Rule,
    pub m: usize,
    pub n: usize,
    /// Budget shared by every voter.
    pub delta: usize,
    pub manipulators: usize,
    pub trials: usize,
    pub seed: u64,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.m == 0 || self.n == 0 {
            return Err(Error::invalid("m and n must be positive"));
        }
        if self.trials == 0 {
            return Err(Error::invalid("at least one trial is required"));
        }
        if self.manipulators == 0 {
            return Err(Error::invalid("at least one manipulator is required"));
        }
        if self.delta > max_kendall_tau(self.m) {
            return Err(Error::invalid(format!(
                "δ = {} exceeds m(m-1)/2 = {}",
                self.delta,
                max_kendall_tau(self.m)
            )));
        }
        self.rule.validate(self.m)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRow {
    pub rule: Rule,
    pub m: usize,
    pub n: usize,
    pub delta: usize,
    pub trials: usize,
    pub seed: u64,
    pub yes_count: usize,
    pub fraction: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ExperimentOptions {
    /// Only count `c` that are not already co-winners of the sampled profile.
    pub non_winners_only: bool,
    pub budget: ExhaustiveBudget,
}

/// The random stream for one trial. It depends only on `(seed, trial)`, so
/// the same trial sees the same profile for every `δ` and thread count.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

pub fn random_ranking<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Ranking {
    let mut order: Vec<Alternative> = (0..m).map(Alternative).collect();
    order.shuffle(rng);
    Ranking::new(order).expect("a permutation")
}

pub fn random_profile<R: Rng + ?Sized>(m: usize, n: usize, rng: &mut R) -> Result<Profile> {
    Profile::new((0..n).map(|_| random_ranking(m, rng)).collect())
}

/// Decides one instance with the polynomial decider when there is one and
/// with the exhaustive oracle otherwise.
pub fn decide_any(inst: &Instance, budget: ExhaustiveBudget) -> Result<bool> {
    if has_polynomial_decider(inst.rule(), inst.m(), inst.manipulators()) {
        Ok(decide(inst)?.is_yes())
    } else {
        Ok(decide_exhaustive(inst, budget)?.is_yes())
    }
}

/// Whether some alternative can be kept a co-winner by `manipulators`
/// manipulators when every voter may deviate by up to `delta` swaps.
pub fn is_stably_manipulable(
    profile: &Profile,
    delta: usize,
    manipulators: usize,
    rule: &Rule,
    opts: &ExperimentOptions,
) -> Result<bool> {
    let m = profile.m();
    let current = if opts.non_winners_only {
        Evaluator::new(rule, m)?.winners(profile.rankings())
    } else {
        Vec::new()
    };
    for c in (0..m).map(Alternative).filter(|c| !current.contains(c)) {
        let inst = Instance::uniform(profile.clone(), c, delta, manipulators, rule.clone())?;
        if decide_any(&inst, opts.budget)? {
            return Ok(true);
        }
    }
    Ok(false)
}

fn run_row(cfg: &ExperimentConfig, opts: &ExperimentOptions) -> Result<ExperimentRow> {
    cfg.validate()?;
    let outcomes: Vec<bool> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(cfg.seed, trial as u64);
            let p = random_profile(cfg.m, cfg.n, &mut rng)?;
            is_stably_manipulable(&p, cfg.delta, cfg.manipulators, &cfg.rule, opts)
        })
        .collect::<Result<_>>()?;
    let yes_count = outcomes.iter().filter(|&&y| y).count();
    Ok(ExperimentRow {
        rule: cfg.rule.clone(),
        m: cfg.m,
        n: cfg.n,
        delta: cfg.delta,
        trials: cfg.trials,
        seed: cfg.seed,
        yes_count,
        fraction: yes_count as f64 / cfg.trials as f64,
    })
}

/// One result per config, in input order. A failing config does not stop
/// the others. `jobs = 0` uses rayon's default thread count.
pub fn run_grid(
    cfgs: &[ExperimentConfig],
    opts: &ExperimentOptions,
    jobs: usize,
) -> Result<Vec<Result<ExperimentRow>>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::invalid(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(|| cfgs.iter().map(|cfg| run_row(cfg, opts)).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(rule: Rule, m: usize, n: usize, delta: usize, trials: usize) -> ExperimentConfig {
        ExperimentConfig {
            rule,
            m,
            n,
            delta,
            manipulators: 1,
            trials,
            seed: 7,
        }
    }

    #[test]
    fn same_seed_same_profile() {
        let a = random_profile(5, 4, &mut trial_rng(3, 9)).unwrap();
        let b = random_profile(5, 4, &mut trial_rng(3, 9)).unwrap();
        let c = random_profile(5, 4, &mut trial_rng(3, 10)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn single_alternative() {
        let p = random_profile(1, 3, &mut trial_rng(0, 0)).unwrap();
        assert!(p.rankings().iter().all(|r| *r == Ranking::identity(1)));
    }

    #[test]
    fn uniform_over_rankings() {
        let mut rng = trial_rng(11, 0);
        let mut counts = std::collections::HashMap::new();
        let draws = 60_000;
        for _ in 0..draws {
            *counts.entry(random_ranking(3, &mut rng)).or_insert(0usize) += 1;
        }
        assert_eq!(counts.len(), 6);
        let expected = draws as f64 / 6.0;
        let chi2: f64 = counts
            .values()
            .map(|&o| (o as f64 - expected).powi(2) / expected)
            .sum();
        // 99th percentile of χ² with 5 degrees of freedom.
        assert!(chi2 < 15.086, "χ² = {chi2}");
    }

    #[test]
    fn zero_budget_is_always_manipulable() {
        let opts = ExperimentOptions::default();
        for trial in 0..20 {
            let p = random_profile(4, 3, &mut trial_rng(1, trial)).unwrap();
            for rule in [Rule::Plurality, Rule::Borda, Rule::Maximin, Rule::Bucklin] {
                assert!(is_stably_manipulable(&p, 0, 1, &rule, &opts).unwrap());
            }
        }
    }

    #[test]
    fn grid_rows_are_deterministic_and_ordered() {
        let opts = ExperimentOptions::default();
        assert!(run_grid(&[], &opts, 1).unwrap().is_empty());
        let c = cfg(Rule::Borda, 4, 3, 1, 30);
        let rows = run_grid(&[c.clone(), c.clone()], &opts, 2).unwrap();
        let again = run_grid(&[c], &opts, 3).unwrap();
        assert_eq!(rows[0], rows[1]);
        assert_eq!(rows[0], again[0]);
        let row = rows[0].as_ref().unwrap();
        assert!(row.yes_count <= row.trials);
    }

    #[test]
    fn fractions_do_not_grow_with_delta() {
        let opts = ExperimentOptions::default();
        for rule in [Rule::Plurality, Rule::Borda, Rule::Maximin] {
            let cfgs: Vec<_> = (0..=2).map(|d| cfg(rule.clone(), 5, 4, d, 40)).collect();
            let rows: Vec<_> = run_grid(&cfgs, &opts, 0)
                .unwrap()
                .into_iter()
                .map(|r| r.unwrap())
                .collect();
            assert!(rows.windows(2).all(|w| w[0].fraction >= w[1].fraction), "{rows:?}");
        }
    }

    #[test]
    fn bad_rows_fail_alone() {
        let opts = ExperimentOptions::default();
        let rows = run_grid(
            &[cfg(Rule::Plurality, 3, 2, 9, 5), cfg(Rule::Plurality, 3, 2, 0, 5)],
            &opts,
            1,
        )
        .unwrap();
        assert!(rows[0].is_err());
        assert_eq!(rows[1].as_ref().unwrap().fraction, 1.0);
    }
}
