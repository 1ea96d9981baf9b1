//! Fixed random workloads for the benchmarks in `benches/`.

use stablemanip::experiments::{random_profile, trial_rng};
use stablemanip::{Alternative, Instance, Result, Rule};

/// A uniform random profile with `c = 0` and budget `delta` for every voter.
pub fn random_instance(rule: Rule, m: usize, n: usize, delta: usize, seed: u64) -> Result<Instance> {
    let profile = random_profile(m, n, &mut trial_rng(seed, 0))?;
    Instance::uniform(profile, Alternative(0), delta, 1, rule)
}
