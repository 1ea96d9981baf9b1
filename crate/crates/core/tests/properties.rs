mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use stablemanip::deciders::{decide_kapproval, decide_scoring};
use stablemanip::experiments::random_ranking;
use stablemanip::oracle::{find_defeating_profile, kt_ball, kt_ball_size};
use stablemanip::{
    decide, decide_anonymous, decide_exhaustive, kendall_tau, AnonymousBudget, CopelandAlpha,
    ExhaustiveBudget, Instance, Rule, ScoringVector,
};

use common::{bfs_distances, random_instance};

fn polynomial_rules() -> Vec<Rule> {
    vec![
        Rule::Plurality,
        Rule::Veto,
        Rule::KApproval(2),
        Rule::Borda,
        Rule::Maximin,
        Rule::Bucklin,
        Rule::SimplifiedBucklin,
    ]
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn kendall_tau_matches_bfs(seed: u64, m in 1usize..6) {
        let mut r = rng(seed);
        let a = random_ranking(m, &mut r);
        let b = random_ranking(m, &mut r);
        let dist = bfs_distances(&a);
        prop_assert_eq!(kendall_tau(&a, &b).unwrap(), dist[&b]);
        prop_assert_eq!(kendall_tau(&b, &a).unwrap(), dist[&b]);
    }

    #[test]
    fn ball_size_does_not_depend_on_center(seed: u64, m in 1usize..6, radius in 0usize..11) {
        let center = random_ranking(m, &mut rng(seed));
        let ball = kt_ball(&center, radius);
        prop_assert_eq!(ball.len() as u128, kt_ball_size(m, radius));
        prop_assert!(ball.contains(&center));
    }

    #[test]
    fn shrinking_budgets_never_turns_yes_into_no(seed: u64, rule_idx in 0usize..7) {
        let rule = &polynomial_rules()[rule_idx];
        let mut r = rng(seed);
        let inst = random_instance(&mut r, rule, 6, 5, 4, 1);
        let smaller: Vec<usize> = inst.deltas().iter().map(|&d| d.saturating_sub(1)).collect();
        let lower = inst.with_deltas(smaller).unwrap();
        if decide(&inst).unwrap().is_yes() {
            prop_assert!(decide(&lower).unwrap().is_yes());
        }
    }

    #[test]
    fn one_approval_flow_agrees_with_plurality_scores(seed: u64) {
        let inst = random_instance(&mut rng(seed), &Rule::Plurality, 6, 6, 3, 1);
        let flow = decide_kapproval(&inst, 1).unwrap();
        let scores = decide_scoring(&inst, &ScoringVector::plurality(inst.m()).unwrap()).unwrap();
        prop_assert_eq!(flow.is_yes(), scores.is_yes());
    }

    #[test]
    fn polynomial_witnesses_survive_every_perturbation(seed: u64, rule_idx in 0usize..7) {
        let rule = &polynomial_rules()[rule_idx];
        let inst = random_instance(&mut rng(seed), rule, 5, 3, 2, 1);
        if let Some(w) = decide(&inst).unwrap().witness() {
            let found = find_defeating_profile(&inst, w, ExhaustiveBudget::default()).unwrap();
            prop_assert!(found.is_none(), "{:?} defeated by {:?}", w, found);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn anonymous_search_agrees_with_exhaustive(seed: u64, rule_idx in 0usize..4, l in 1usize..3) {
        let rules = [Rule::Borda, Rule::Copeland(CopelandAlpha::ZERO), Rule::Stv, Rule::Maximin];
        let inst: Instance = random_instance(&mut rng(seed), &rules[rule_idx], 3, 3, 1, l);
        let anon = decide_anonymous(&inst, AnonymousBudget::default()).unwrap();
        let full = decide_exhaustive(&inst, ExhaustiveBudget::default()).unwrap();
        prop_assert_eq!(anon.is_yes(), full.is_yes());
    }
}
