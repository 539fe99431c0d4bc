mod common;

use num_traits::{One, Signed, Zero};
use rand::Rng;

use robustvote::enumerate::all_rules;
use robustvote::profile::DecisionProfile;
use robustvote::rational::{int, ratio, sum};
use robustvote::respond::{
    agreement_counts, mean, mean_responsiveness_by_count, responsiveness, responsiveness_random,
    rtf_max_weighted,
};
use robustvote::{Distribution, Rational, VotingRule};

use common::{
    direct_responsiveness, direct_responsiveness_random, is_wmr_with, one_dissenter, weight_grid,
};

#[test]
fn majority_under_uniform() {
    let smr = VotingRule::simple_majority(3, 1).unwrap();
    let p = Distribution::uniform(3).unwrap();
    assert_eq!(responsiveness(&smr, &p).unwrap(), vec![ratio(3, 4); 3]);
    assert_eq!(
        mean_responsiveness_by_count(&smr, &p.count_probs()).unwrap(),
        ratio(3, 4)
    );
    assert_eq!(agreement_counts(&smr).unwrap(), vec![3, 2, 2, 3]);
}

#[test]
fn agreeing_profile_gives_full_responsiveness() {
    let mut rng = common::rng(11);
    for _ in 0..50 {
        let r = common::random_rule(&mut rng, 3);
        for x in DecisionProfile::all(3) {
            let resp = responsiveness(&r, &Distribution::degenerate(x)).unwrap();
            for i in 1..=3 {
                let expected = if r.outcome(x) == x.vote(i) {
                    int(1)
                } else {
                    int(0)
                };
                assert_eq!(resp[i - 1], expected);
            }
        }
    }
}

#[test]
fn unanimity_against_the_dissenters() {
    let un = VotingRule::unanimity(3).unwrap();
    let points: Vec<Distribution> = (1..=3).map(|i| one_dissenter(3, i)).collect();
    let p = Distribution::mixture(&points, &[ratio(1, 3), ratio(1, 3), ratio(1, 3)]).unwrap();
    assert_eq!(responsiveness(&un, &p).unwrap(), vec![ratio(1, 3); 3]);
    for n in 2..=6 {
        let d = agreement_counts(&VotingRule::unanimity(n).unwrap()).unwrap();
        let expected: Vec<usize> = (0..n).map(|k| n - k).chain([n]).collect();
        assert_eq!(d, expected);
    }
}

#[test]
fn count_form_rejects_non_anonymous_rules() {
    let d = VotingRule::dictator(3, 2).unwrap();
    assert!(agreement_counts(&d).is_err());
    assert!(mean_responsiveness_by_count(&d, &vec![ratio(1, 4); 4]).is_err());
}

#[test]
fn majority_beats_two_thirds_by_the_five_count_mass() {
    let smr = VotingRule::simple_majority(9, 1).unwrap();
    let two_thirds = VotingRule::quota(9, 6).unwrap();
    let mut counts = vec![int(0); 10];
    counts[9] = ratio(3, 4);
    counts[5] = ratio(1, 4);
    let gap = mean_responsiveness_by_count(&smr, &counts).unwrap()
        - mean_responsiveness_by_count(&two_thirds, &counts).unwrap();
    assert_eq!(gap * int(9), ratio(1, 4));
}

#[test]
fn rtf_examples() {
    let p = Distribution::uniform(2).unwrap();
    let m = rtf_max_weighted(&[int(1), int(1)], &p).unwrap();
    assert_eq!(m.responsiveness_value, ratio(3, 2));
    let mut rng = common::rng(3);
    for _ in 0..10 {
        let p = common::random_distribution(&mut rng, 3, false);
        for i in 1..=3 {
            let e: Vec<Rational> = (1..=3).map(|j| int(i64::from(i == j))).collect();
            let m = rtf_max_weighted(&e, &p).unwrap();
            assert_eq!(m.responsiveness_value, int(1));
            assert_eq!(m.argmax, VotingRule::dictator(3, i).unwrap());
        }
    }
    assert!(rtf_max_weighted(&[int(0), int(0)], &p).is_err());
}

/// Brute force: the best of all `2^(2ⁿ)` rules.
fn best_weighted_sum(w: &[Rational], p: &Distribution) -> Rational {
    all_rules(w.len())
        .unwrap()
        .map(|r| {
            let resp = direct_responsiveness(&r, p);
            w.iter()
                .zip(&resp)
                .fold(Rational::zero(), |a, (wi, ri)| a + wi * ri)
        })
        .max()
        .unwrap()
}

#[test]
fn rtf_identity_against_brute_force() {
    let mut rng = common::rng(5);
    for _ in 0..60 {
        let n = rng.gen_range(1..=3);
        let w: Vec<Rational> = (0..n)
            .map(|_| ratio(rng.gen_range(-4..=4), rng.gen_range(1..=3)))
            .collect();
        if w.iter().all(Zero::is_zero) {
            continue;
        }
        let p = common::random_distribution(&mut rng, n, false);
        let m = rtf_max_weighted(&w, &p).unwrap();
        assert_eq!(m.responsiveness_value, best_weighted_sum(&w, &p));
        let abs = DecisionProfile::all(n).fold(Rational::zero(), |a, x| {
            let s = (1..=n).fold(Rational::zero(), |s, i| {
                s + &w[i - 1] * int(x.vote(i).into())
            });
            a + s.abs() * p.prob(x)
        });
        assert_eq!(m.value, abs);
        assert_eq!(m.responsiveness_value, (abs + sum(&w)) / int(2));
    }
}

#[test]
fn weighted_majorities_attain_the_maximum() {
    let mut rng = common::rng(9);
    for n in 1..=3 {
        for w in weight_grid(n, -2, 2) {
            let wr: Vec<Rational> = w.iter().map(|x| int(*x)).collect();
            let p = common::random_distribution(&mut rng, n, false);
            let best = rtf_max_weighted(&wr, &p).unwrap().responsiveness_value;
            for r in all_rules(n).unwrap().filter(|r| is_wmr_with(r, &w, true)) {
                let resp = responsiveness(&r, &p).unwrap();
                let got = wr
                    .iter()
                    .zip(&resp)
                    .fold(Rational::zero(), |a, (x, y)| a + x * y);
                assert_eq!(got, best, "{r} with {w:?}");
            }
        }
    }
}

#[test]
fn fuzzed_identities() {
    let mut rng = common::rng(13);
    for _ in 0..300 {
        let n = rng.gen_range(1..=4);
        let r = common::random_rule(&mut rng, n);
        let p = common::random_distribution(&mut rng, n, false);
        let resp = responsiveness(&r, &p).unwrap();
        assert_eq!(resp, direct_responsiveness(&r, &p));
        let inv = responsiveness(&r.inverse(), &p).unwrap();
        assert!(resp.iter().zip(&inv).all(|(a, b)| (a + b).is_one()));

        let rr = common::random_random_rule(&mut rng, n);
        let resp = responsiveness_random(&rr, &p).unwrap();
        assert_eq!(resp, direct_responsiveness_random(&rr, &p));
        assert!(resp.iter().all(|v| !v.is_negative() && *v <= int(1)));
        let inv = responsiveness_random(&rr.inverse(), &p).unwrap();
        assert!(resp.iter().zip(&inv).all(|(a, b)| (a + b).is_one()));
    }
}

/// Positive weights may be scaled to sum one; robustness of the weighted
/// mean at the degenerate points is exactly the weighted-majority condition.
#[test]
fn weighted_mean_condition_at_degenerate_points() {
    for n in 1..=3 {
        let degenerates: Vec<Distribution> = DecisionProfile::all(n)
            .map(Distribution::degenerate)
            .collect();
        for w in weight_grid(n, 0, 2) {
            let total = int(w.iter().sum());
            for r in all_rules(n).unwrap() {
                let scores: Vec<Rational> = degenerates
                    .iter()
                    .map(|p| {
                        let resp = responsiveness(&r, p).unwrap();
                        w.iter()
                            .zip(&resp)
                            .fold(Rational::zero(), |a, (x, y)| a + int(*x) * y)
                            / &total
                    })
                    .collect();
                let half = ratio(1, 2);
                assert_eq!(is_wmr_with(&r, &w, true), scores.iter().all(|s| *s >= half));
                assert_eq!(is_wmr_with(&r, &w, false), scores.iter().all(|s| *s > half));
            }
        }
    }
}

#[test]
fn anonymous_rules_treat_everyone_alike_under_symmetric_priors() {
    let mut rng = common::rng(17);
    for n in 1..=4 {
        let anonymous: Vec<VotingRule> = all_rules(n)
            .unwrap()
            .filter(VotingRule::is_anonymous)
            .collect();
        for _ in 0..10 {
            let by_count: Vec<i64> = (0..=n).map(|_| rng.gen_range(0..=5)).collect();
            let raw: Vec<i64> = DecisionProfile::all(n)
                .map(|x| by_count[x.count_plus()])
                .collect();
            let total: i64 = raw.iter().sum();
            if total == 0 {
                continue;
            }
            let p = Distribution::new(n, raw.iter().map(|m| ratio(*m, total)).collect()).unwrap();
            for r in &anonymous {
                let resp = responsiveness(r, &p).unwrap();
                assert!(resp.iter().all(|v| *v == resp[0]));
                assert_eq!(
                    mean(&resp),
                    mean_responsiveness_by_count(r, &p.count_probs()).unwrap()
                );
            }
        }
    }
}
