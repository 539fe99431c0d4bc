mod common;

use proptest::prelude::*;

use robustvote::enumerate::all_rules;
use robustvote::io;
use robustvote::profile::{DecisionProfile, Permutation};
use robustvote::rational::half;
use robustvote::robustness;
use robustvote::{Distribution, DistributionSet, RandomVotingRule, VotingRule};

use common::{anonymous_by_definition, direct_responsiveness};

#[test]
fn inverse_flips_every_entry() {
    let smr = VotingRule::parse("---+-+++").unwrap();
    assert_eq!(smr.inverse().table_string(), "+++-+---");
    for r in all_rules(3).unwrap() {
        assert_eq!(r.inverse().inverse(), r);
        assert_eq!(r.is_anonymous(), r.inverse().is_anonymous());
    }
}

#[test]
fn popcount_anonymity_matches_the_definition() {
    for n in 1..=3 {
        for r in all_rules(n).unwrap() {
            assert_eq!(r.is_anonymous(), anonymous_by_definition(&r), "{r}");
        }
    }
    assert!(VotingRule::parse("---+-+++").unwrap().is_anonymous());
    assert!(!VotingRule::parse("-+-+-+-+").unwrap().is_anonymous());
    assert!(VotingRule::parse("-------+").unwrap().is_anonymous());
}

#[test]
fn anonymity_is_invariance_under_relabeling() {
    let perms = Permutation::all(2);
    for r in all_rules(2).unwrap() {
        let fixed = perms.iter().all(|pi| r.apply_permutation(pi).unwrap() == r);
        assert_eq!(fixed, r.is_anonymous(), "{r}");
    }
}

#[test]
fn relabeling_is_a_group_action() {
    let perms = Permutation::all(3);
    let mut rng = common::rng(7);
    for _ in 0..20 {
        let r = common::random_rule(&mut rng, 3);
        assert_eq!(r.apply_permutation(&Permutation::identity(3)).unwrap(), r);
        for pi in &perms {
            for sigma in &perms {
                let step = r
                    .apply_permutation(pi)
                    .unwrap()
                    .apply_permutation(sigma)
                    .unwrap();
                assert_eq!(step, r.apply_permutation(&sigma.compose(pi)).unwrap());
            }
        }
    }
    let d1 = VotingRule::dictator(3, 1).unwrap();
    let swap = Permutation::transposition(3, 1, 2).unwrap();
    assert_eq!(
        d1.apply_permutation(&swap).unwrap(),
        VotingRule::dictator(3, 2).unwrap()
    );
    assert!(Permutation::new(vec![1, 1, 2]).is_err());
    assert!(d1.apply_permutation(&Permutation::identity(2)).is_err());
}

#[test]
fn dictators() {
    assert_eq!(
        VotingRule::parse("-+-+-+-+").unwrap().dictator_index(),
        Some(1)
    );
    assert_eq!(
        VotingRule::simple_majority(3, 1).unwrap().dictator_index(),
        None
    );
    for r in all_rules(3).unwrap() {
        if r.dictator_index().is_some() {
            assert!(r.is_own_vote_monotone());
            assert!(robustness::is_robust(&r).unwrap().is_robust());
        }
    }
}

/// With a separate prior per individual, the adversary may pick each one's
/// worst case; the rule survives iff some `i` keeps `r_i > 1/2` at every
/// degenerate distribution.
#[test]
fn heterogeneous_priors_single_out_dictators() {
    let degenerates: Vec<Distribution> = DecisionProfile::all(3)
        .map(Distribution::degenerate)
        .collect();
    for r in all_rules(3).unwrap() {
        let oracle = (0..3).any(|i| {
            degenerates
                .iter()
                .all(|p| direct_responsiveness(&r, p)[i] > half())
        });
        assert_eq!(robustness::is_robust_heterogeneous(&r), oracle, "{r}");
        assert_eq!(r.dictator_index().is_some(), oracle, "{r}");
    }
}

#[test]
fn own_vote_monotonicity() {
    assert!(VotingRule::simple_majority(3, 1)
        .unwrap()
        .is_own_vote_monotone());
    assert!(VotingRule::unanimity(3).unwrap().is_own_vote_monotone());
    let m = VotingRule::simple_majority(3, 1)
        .unwrap()
        .inverse()
        .own_vote_monotonicity();
    assert!(!m.monotone);
    let w = m.witness.unwrap();
    assert_eq!((w.individual, w.others.as_str()), (1, "+-"));
}

#[test]
fn enumeration_limits() {
    assert_eq!(all_rules(2).unwrap().count(), 16);
    assert!(all_rules(5).is_err());
    assert!(VotingRule::new(17, vec![]).is_err());
}

fn rule_strategy() -> impl Strategy<Value = VotingRule> {
    (1usize..=4).prop_flat_map(|n| {
        prop::collection::vec(prop_oneof![Just(-1i8), Just(1i8)], 1 << n)
            .prop_map(move |o| VotingRule::new(n, o).unwrap())
    })
}

fn random_rule_strategy() -> impl Strategy<Value = RandomVotingRule> {
    (1usize..=3).prop_flat_map(|n| {
        prop::collection::vec(
            (-6i64..=6).prop_map(|k| robustvote::rational::ratio(k, 6)),
            1 << n,
        )
        .prop_map(move |o| RandomVotingRule::new(n, o).unwrap())
    })
}

fn distribution_strategy() -> impl Strategy<Value = Distribution> {
    (1usize..=3).prop_flat_map(|n| {
        prop::collection::vec(0i64..=5, 1 << n).prop_filter_map("nonzero mass", move |m| {
            let total: i64 = m.iter().sum();
            (total > 0).then(|| {
                Distribution::new(
                    n,
                    m.iter()
                        .map(|k| robustvote::rational::ratio(*k, total))
                        .collect(),
                )
                .unwrap()
            })
        })
    })
}

proptest! {
    #[test]
    fn rules_round_trip(r in rule_strategy()) {
        prop_assert_eq!(io::rule_from_json(&io::rule_to_json(&r)).unwrap(), r.clone());
        let text = serde_json::to_string(&io::rule_to_json(&r)).unwrap();
        prop_assert_eq!(io::rule_from_json(&serde_json::from_str(&text).unwrap()).unwrap(), r);
    }

    #[test]
    fn random_rules_round_trip(r in random_rule_strategy()) {
        prop_assert_eq!(io::random_rule_from_json(&io::random_rule_to_json(&r)).unwrap(), r);
    }

    #[test]
    fn distributions_round_trip(p in distribution_strategy(), q in distribution_strategy()) {
        prop_assert_eq!(io::distribution_from_json(&io::distribution_to_json(&p)).unwrap(), p.clone());
        if p.n() == q.n() {
            let set = DistributionSet::new(vec![p, q]).unwrap();
            prop_assert_eq!(io::distribution_set_from_json(&io::distribution_set_to_json(&set)).unwrap(), set);
        }
    }
}
