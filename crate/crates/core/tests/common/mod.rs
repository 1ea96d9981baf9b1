#![allow(dead_code)]

use std::collections::{HashMap, VecDeque};

use rand::seq::IndexedRandom;
use rand::Rng;
use stablemanip::experiments::random_profile;
use stablemanip::model::max_kendall_tau;
use stablemanip::{Alternative, Instance, Ranking, Rule};

/// Exact adjacent-swap distance from `start` to every ranking.
pub fn bfs_distances(start: &Ranking) -> HashMap<Ranking, usize> {
    let mut dist = HashMap::from([(start.clone(), 0usize)]);
    let mut queue = VecDeque::from([start.clone()]);
    while let Some(r) = queue.pop_front() {
        let d = dist[&r];
        for i in 0..r.m() - 1 {
            let mut next = r.clone();
            next.swap_adjacent(i);
            if !dist.contains_key(&next) {
                dist.insert(next.clone(), d + 1);
                queue.push_back(next);
            }
        }
    }
    dist
}

/// Closest ranking satisfying `goal`, by BFS distance.
pub fn min_distance(dist: &HashMap<Ranking, usize>, goal: impl Fn(&Ranking) -> bool) -> Option<usize> {
    dist.iter().filter(|(r, _)| goal(r)).map(|(_, &d)| d).min()
}

pub fn all_rankings(m: usize) -> Vec<Ranking> {
    use itertools::Itertools;
    (0..m)
        .permutations(m)
        .map(|p| Ranking::from_indices(&p).unwrap())
        .collect()
}

/// Smallest number of alternatives the rule accepts.
pub fn min_m(rule: &Rule) -> usize {
    match rule {
        Rule::KApproval(k) => k + 1,
        Rule::Scoring(v) => v.len(),
        _ => 2,
    }
}

pub fn max_m(rule: &Rule, cap: usize) -> usize {
    match rule {
        Rule::Scoring(v) => v.len(),
        _ => cap,
    }
}

/// Random instance with `m ≤ max_m`, `1 ≤ n ≤ max_n` and per-voter budgets
/// up to `max_delta`.
pub fn random_instance<R: Rng>(
    rng: &mut R,
    rule: &Rule,
    max_m: usize,
    max_n: usize,
    max_delta: usize,
    manipulators: usize,
) -> Instance {
    let m = rng.random_range(min_m(rule)..=self::max_m(rule, max_m));
    let n = rng.random_range(1..=max_n);
    let p = random_profile(m, n, rng).unwrap();
    let cap = max_delta.min(max_kendall_tau(m));
    let deltas = (0..n).map(|_| rng.random_range(0..=cap)).collect();
    let c = Alternative(rng.random_range(0..m));
    Instance::new(p, c, deltas, manipulators, rule.clone()).unwrap()
}

pub fn pick<'a, T, R: Rng>(rng: &mut R, xs: &'a [T]) -> &'a T {
    xs.choose(rng).unwrap()
}
