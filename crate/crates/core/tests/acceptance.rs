//! End-to-end acceptance checks. Runs without the test harness so every
//! line prints; exits nonzero if any check fails. All comparisons are exact.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_traits::{One, Signed, Zero};
use rand::Rng;

use robustvote::efficiency::{is_strictly_efficient, pareto_compare};
use robustvote::enumerate::all_rules;
use robustvote::gamma::{epsilon_lower, epsilon_upper, gamma_counterexample, is_strategy_proof};
use robustvote::profile::DecisionProfile;
use robustvote::random_rules::{
    anonymous_even_impossibility, dominating_distribution, is_robust_random,
};
use robustvote::rational::{half, int, ratio, sum, ExtendedRational};
use robustvote::respond::{responsiveness_random, rtf_max_weighted};
use robustvote::robustness::{
    certify_p_robust, is_robust, is_weakly_robust, one_dissenter_points, Mode,
    RobustnessCertificate, Verdict,
};
use robustvote::rule::AnyRule;
use robustvote::wmr::{detect_wmr, SignClass, Ties, WmrQuery};
use robustvote::{Distribution, DistributionSet, RandomVotingRule, Rational, VotingRule};

use common::{
    direct_responsiveness, direct_responsiveness_random, is_wmr_with, majority_vs_two_thirds,
    max_min_on_simplex, responsiveness_matrix, weight_grid,
};

type Check = Result<(), String>;

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn tables(rules: &[VotingRule]) -> Vec<String> {
    rules.iter().map(VotingRule::table_string).collect()
}

fn degenerate_robustness_is_nonnegative_wmr() -> Check {
    let strict_q = WmrQuery::new(SignClass::NonNegative, Ties::Forbidden);
    let weak_q = WmrQuery::new(SignClass::NonNegative, Ties::Allowed);
    let grid = weight_grid(3, 0, 4);
    let mut robust = Vec::new();
    for r in all_rules(3).map_err(|e| e.to_string())? {
        let s = is_robust(&r).map_err(|e| e.to_string())?.is_robust();
        let w = is_weakly_robust(&r).map_err(|e| e.to_string())?.is_robust();
        let wmr_s = detect_wmr(&r, strict_q)
            .map_err(|e| e.to_string())?
            .is_some();
        let wmr_w = detect_wmr(&r, weak_q).map_err(|e| e.to_string())?.is_some();
        ensure(s == wmr_s && w == wmr_w, || {
            format!("{r}: robust {s}/{w}, wmr {wmr_s}/{wmr_w}")
        })?;
        let grid_s = grid.iter().any(|v| is_wmr_with(&r, v, false));
        let grid_w = grid.iter().any(|v| is_wmr_with(&r, v, true));
        ensure(s == grid_s && w == grid_w, || {
            format!("{r}: weight-grid oracle disagrees")
        })?;
        if s {
            robust.push(r);
        }
    }
    ensure(robust.len() == 4, || {
        format!("expected 4 robust rules, got {:?}", tables(&robust))
    })
}

fn anonymous_robust_rules() -> Check {
    let pick = |n: usize, weak: bool| -> Result<Vec<String>, String> {
        let mut out = Vec::new();
        for r in all_rules(n)
            .map_err(|e| e.to_string())?
            .filter(VotingRule::is_anonymous)
        {
            let cert = if weak {
                is_weakly_robust(&r)
            } else {
                is_robust(&r)
            };
            if cert.map_err(|e| e.to_string())?.is_robust() {
                out.push(r.table_string());
            }
        }
        Ok(out)
    };
    let smr3 = VotingRule::simple_majority(3, 1).unwrap().table_string();
    let got = pick(3, false)?;
    ensure(got == vec![smr3.clone()], || {
        format!("n=3 robust anonymous: {got:?}")
    })?;
    let anon4 = all_rules(4)
        .unwrap()
        .filter(VotingRule::is_anonymous)
        .count();
    ensure(anon4 == 32, || format!("{anon4} anonymous rules at n=4"))?;
    let got = pick(4, false)?;
    ensure(got.is_empty(), || format!("n=4 robust anonymous: {got:?}"))?;
    for n in 2..=4 {
        let mut expected: Vec<String> = [1, -1]
            .iter()
            .map(|&t| VotingRule::simple_majority(n, t).unwrap().table_string())
            .collect();
        expected.sort();
        expected.dedup();
        let mut got = pick(n, true)?;
        got.sort();
        ensure(got == expected, || {
            format!("n={n} weakly robust anonymous: {got:?}, expected {expected:?}")
        })?;
    }
    Ok(())
}

fn strict_efficiency_equals_robustness() -> Check {
    let mut rng = common::rng(2024);
    let mut priors = vec![Distribution::uniform(3).unwrap()];
    priors.extend((0..5).map(|_| common::random_distribution(&mut rng, 3, true)));
    for r in all_rules(3).map_err(|e| e.to_string())? {
        let robust = is_robust(&r).map_err(|e| e.to_string())?.is_robust();
        for p in &priors {
            let res = is_strictly_efficient(&r, p).map_err(|e| e.to_string())?;
            ensure(res.efficient == robust, || {
                format!("{r}: efficient {} but robust {robust}", res.efficient)
            })?;
            ensure(res.verify(&r, p), || {
                format!("{r}: efficiency certificate rejected")
            })?;
        }
    }
    Ok(())
}

fn majority_dominates_two_thirds() -> Check {
    let p = majority_vs_two_thirds(&ratio(1, 4));
    let smr = VotingRule::simple_majority(9, 1).unwrap();
    let two_thirds = VotingRule::quota(9, 6).unwrap();
    let v = pareto_compare(
        &AnyRule::Deterministic(smr.clone()),
        &AnyRule::Deterministic(two_thirds.clone()),
        &p,
    )
    .map_err(|e| e.to_string())?;
    ensure(v.a_strictly_preferred(), || {
        format!("relation {:?}", v.relation)
    })?;
    ensure(v.deltas == vec![ratio(1, 36); 9], || {
        format!("deltas {:?}", v.deltas)
    })?;
    ensure(sum(&v.deltas) == ratio(1, 4), || {
        "total gap is not 1/4".into()
    })?;
    let direct: Vec<Rational> = direct_responsiveness(&smr, &p)
        .iter()
        .zip(direct_responsiveness(&two_thirds, &p))
        .map(|(a, b)| a - b)
        .collect();
    ensure(direct == v.deltas, || {
        "direct responsiveness disagrees".into()
    })
}

fn unanimity_fails_on_the_hull() -> Check {
    let un = VotingRule::unanimity(3).unwrap();
    let points = one_dissenter_points(3).map_err(|e| e.to_string())?;
    for (i, p) in points.iter().enumerate() {
        let single = DistributionSet::new(vec![p.clone()]).unwrap();
        let cert = certify_p_robust(&un, &single, Mode::Strict).map_err(|e| e.to_string())?;
        ensure(cert.is_robust(), || format!("not robust at p_{}", i + 1))?;
        ensure(direct_responsiveness(&un, p)[i].is_one(), || {
            format!("r_{} != 1 at p_{}", i + 1, i + 1)
        })?;
    }
    let hull = DistributionSet::new(points).unwrap();
    let cert = certify_p_robust(&un, &hull, Mode::Strict).map_err(|e| e.to_string())?;
    ensure(cert.verdict == Verdict::NotRobust, || {
        "robust on the hull".into()
    })?;
    let lambda = vec![ratio(1, 3); 3];
    ensure(cert.mixture.as_ref() == Some(&lambda), || {
        format!("mixture {:?}", cert.mixture)
    })?;
    let mix = Distribution::mixture(hull.extreme_points(), &lambda).unwrap();
    let r = direct_responsiveness(&un, &mix);
    ensure(r == vec![ratio(1, 3); 3], || {
        format!("responsiveness {r:?}")
    })
}

fn rtf_identity() -> Check {
    let mut rng = common::rng(6);
    for _ in 0..100 {
        let n = rng.gen_range(1..=4);
        let w_int: Vec<i64> = loop {
            let w: Vec<i64> = (0..n).map(|_| rng.gen_range(-6..=6)).collect();
            if w.iter().any(|x| *x != 0) {
                break w;
            }
        };
        let w_den = rng.gen_range(1..=5);
        let masses: Vec<i64> = loop {
            let m: Vec<i64> = (0..1usize << n).map(|_| rng.gen_range(0..=7)).collect();
            if m.iter().any(|x| *x != 0) {
                break m;
            }
        };
        let total: i64 = masses.iter().sum();
        let w: Vec<Rational> = w_int.iter().map(|x| ratio(*x, w_den)).collect();
        let p = Distribution::new(n, masses.iter().map(|m| ratio(*m, total)).collect()).unwrap();
        let s: Vec<i64> = DecisionProfile::all(n)
            .map(|x| (1..=n).map(|i| w_int[i - 1] * i64::from(x.vote(i))).sum())
            .collect();
        // Every rule, scored in integers: Σ_x m(x)φ(x)s(x).
        let best = (0..1u64 << (1u64 << n))
            .map(|code| {
                (0..1usize << n)
                    .map(|x| {
                        if code >> x & 1 == 1 {
                            masses[x] * s[x]
                        } else {
                            -masses[x] * s[x]
                        }
                    })
                    .sum::<i64>()
            })
            .max()
            .unwrap();
        let best = ratio(best, total * w_den);
        let abs = ratio(
            masses.iter().zip(&s).map(|(m, v)| m * v.abs()).sum(),
            total * w_den,
        );
        let m = rtf_max_weighted(&w, &p).map_err(|e| e.to_string())?;
        ensure(best == abs && m.value == abs, || {
            format!(
                "w={w_int:?}/{w_den}: brute {best}, |Σwx| {abs}, got {}",
                m.value
            )
        })?;
        let sign_rule = VotingRule::from_fn(n, |x| if s[x.index()] >= 0 { 1 } else { -1 }).unwrap();
        let attained = DecisionProfile::all(n).fold(Rational::zero(), |acc, x| {
            acc + p.prob(x) * int(sign_rule.outcome(x).into()) * ratio(s[x.index()], w_den)
        });
        ensure(attained == abs, || {
            format!("sign rule attains {attained}, not {abs}")
        })?;
        let r = direct_responsiveness(&m.argmax, &p);
        let score = w
            .iter()
            .zip(&r)
            .fold(Rational::zero(), |a, (x, y)| a + x * y);
        ensure(score == m.responsiveness_value, || {
            "argmax does not attain the reported value".into()
        })?;
    }
    Ok(())
}

fn noisy_majority_and_even_impossibility() -> Check {
    let noisy = RandomVotingRule::randomized_majority(3, &ratio(1, 4)).unwrap();
    let out = is_robust_random(&noisy).map_err(|e| e.to_string())?;
    ensure(out.robust && out.weights == Some(vec![int(1); 3]), || {
        format!("{out:?}")
    })?;
    let smr = VotingRule::simple_majority(3, 1).unwrap();
    let all_plus = Distribution::degenerate(DecisionProfile::new(3, 7).unwrap());
    let v = pareto_compare(
        &AnyRule::Deterministic(smr.clone()),
        &AnyRule::Random(noisy.clone()),
        &all_plus,
    )
    .map_err(|e| e.to_string())?;
    ensure(
        v.a_strictly_preferred() && v.deltas == vec![ratio(1, 4); 3],
        || format!("deltas {:?}", v.deltas),
    )?;
    let gap: Vec<Rational> = direct_responsiveness(&smr, &all_plus)
        .iter()
        .zip(direct_responsiveness_random(&noisy, &all_plus))
        .map(|(a, b)| a - b)
        .collect();
    ensure(gap == v.deltas, || "direct computation disagrees".into())?;
    ensure(
        dominating_distribution(&smr, &noisy)
            .map_err(|e| e.to_string())?
            .is_some(),
        || "no dominating distribution found".into(),
    )?;

    // Responsiveness is affine in the table, so the count indicators span
    // every anonymous random rule.
    for n in [2, 4] {
        let p = anonymous_even_impossibility(n).map_err(|e| e.to_string())?;
        for k in 0..=n {
            let basis =
                RandomVotingRule::from_fn(n, |x| int(i64::from(x.count_plus() == k))).unwrap();
            let r = responsiveness_random(&basis, &p).map_err(|e| e.to_string())?;
            ensure(r == vec![half(); n], || format!("n={n}, count {k}: {r:?}"))?;
            ensure(direct_responsiveness_random(&basis, &p) == r, || {
                "direct computation disagrees".into()
            })?;
        }
    }
    Ok(())
}

fn mechanism_thresholds() -> Check {
    for n in 2..=3 {
        for r in all_rules(n).map_err(|e| e.to_string())? {
            if is_robust(&r).map_err(|e| e.to_string())?.is_robust() {
                ensure(is_strategy_proof(&r).monotone, || {
                    format!("{r} robust but manipulable")
                })?;
            }
        }
    }
    for n in 1..=6 {
        let up = epsilon_upper(n).map_err(|e| e.to_string())?;
        ensure(up == int((1 << n) - 2), || format!("upper({n}) = {up}"))?;
    }
    let degenerates: Vec<Distribution> = DecisionProfile::all(3)
        .map(Distribution::degenerate)
        .collect();
    let grid = weight_grid(3, 0, 4);
    let oracle = all_rules(3)
        .unwrap()
        .filter(|r| grid.iter().any(|w| is_wmr_with(r, w, false)))
        .map(|r| max_min_on_simplex(&responsiveness_matrix(&r, &degenerates)))
        .min()
        .unwrap();
    ensure(oracle == ratio(2, 3), || format!("oracle min-max {oracle}"))?;
    let lower = epsilon_lower(3).map_err(|e| e.to_string())?;
    ensure(lower.value == ExtendedRational::Finite(int(1)), || {
        format!("lower(3) = {:?}", lower.value)
    })?;
    for r in all_rules(3)
        .unwrap()
        .filter(|r| r.dictator_index().is_none())
    {
        let w = gamma_counterexample(&r).map_err(|e| e.to_string())?;
        ensure(w.net_gains.iter().all(|g| !g.is_positive()), || {
            format!("{r}: net gains {:?}", w.net_gains)
        })?;
    }
    Ok(())
}

/// Checks a certificate from the definitions, without the library's verifier.
fn independent_check(
    cert: &RobustnessCertificate,
    rule: &VotingRule,
    pset: &DistributionSet,
) -> bool {
    let prob = |v: &[Rational]| v.iter().all(|x| !x.is_negative()) && sum(v).is_one();
    let beats = |x: &Rational| match cert.mode {
        Mode::Strict => *x > half(),
        Mode::Weak => *x >= half(),
    };
    match (cert.verdict, &cert.weights, &cert.mixture) {
        (Verdict::Robust, Some(w), None) => {
            w.len() == rule.n()
                && prob(w)
                && pset.extreme_points().iter().all(|p| {
                    let r = direct_responsiveness(rule, p);
                    beats(
                        &w.iter()
                            .zip(&r)
                            .fold(Rational::zero(), |a, (x, y)| a + x * y),
                    )
                })
        }
        (Verdict::NotRobust, None, Some(l)) => {
            if l.len() != pset.len() || !prob(l) {
                return false;
            }
            let probs: Vec<Rational> = (0..1usize << rule.n())
                .map(|x| {
                    pset.extreme_points()
                        .iter()
                        .zip(l)
                        .fold(Rational::zero(), |a, (p, lj)| a + lj * &p.probs()[x])
                })
                .collect();
            let mix = Distribution::new(rule.n(), probs).unwrap();
            direct_responsiveness(rule, &mix).iter().all(|r| !beats(r))
        }
        _ => false,
    }
}

fn certificate_integrity() -> Check {
    let mut rng = common::rng(9);
    for run in 0..1000 {
        let n = rng.gen_range(1..=3);
        let rule = common::random_rule(&mut rng, n);
        let k = rng.gen_range(1..=5);
        let points: Vec<Distribution> = (0..k)
            .map(|_| {
                if rng.gen_bool(0.4) {
                    Distribution::degenerate(
                        DecisionProfile::new(n, rng.gen_range(0..1 << n)).unwrap(),
                    )
                } else {
                    common::random_distribution(&mut rng, n, false)
                }
            })
            .collect();
        let pset = DistributionSet::new(points).unwrap();
        let mode = if rng.gen_bool(0.5) {
            Mode::Strict
        } else {
            Mode::Weak
        };
        let cert = certify_p_robust(&rule, &pset, mode).map_err(|e| e.to_string())?;
        ensure(
            cert.verify(&rule, &pset) && independent_check(&cert, &rule, &pset),
            || format!("run {run}: {rule} certificate rejected"),
        )?;
        let mut bad = Vec::new();
        let nudge = |v: &Vec<Rational>, j: usize| {
            let mut v = v.clone();
            v[j] += ratio(1, 11);
            v
        };
        if let Some(w) = &cert.weights {
            bad.push(RobustnessCertificate {
                weights: Some(nudge(w, run % w.len())),
                ..cert.clone()
            });
            bad.push(RobustnessCertificate {
                verdict: Verdict::NotRobust,
                ..cert.clone()
            });
        }
        if let Some(l) = &cert.mixture {
            bad.push(RobustnessCertificate {
                mixture: Some(nudge(l, run % l.len())),
                ..cert.clone()
            });
            bad.push(RobustnessCertificate {
                verdict: Verdict::Robust,
                ..cert.clone()
            });
        }
        for b in &bad {
            ensure(
                !b.verify(&rule, &pset) && !independent_check(b, &rule, &pset),
                || format!("run {run}: mutated certificate accepted: {b:?}"),
            )?;
        }
    }
    Ok(())
}

type Criterion = (&'static str, fn() -> Check, Option<Duration>);

fn main() -> ExitCode {
    let checks: [Criterion; 9] = [
        (
            "degenerate robustness = nonnegative WMR, n=3",
            degenerate_robustness_is_nonnegative_wmr,
            Some(Duration::from_secs(5)),
        ),
        (
            "anonymous robust rules, n=2..4",
            anonymous_robust_rules,
            Some(Duration::from_secs(5)),
        ),
        (
            "strict efficiency = robustness, n=3",
            strict_efficiency_equals_robustness,
            Some(Duration::from_secs(60)),
        ),
        (
            "majority beats two-thirds, n=9",
            majority_dominates_two_thirds,
            Some(Duration::from_secs(1)),
        ),
        (
            "unanimity robust per point, not on the hull",
            unanimity_fails_on_the_hull,
            None,
        ),
        ("max weighted responsiveness = E|Σwx|", rtf_identity, None),
        (
            "noisy majority and even-n anonymity",
            noisy_majority_and_even_impossibility,
            None,
        ),
        (
            "strategy-proofness and heterogeneity thresholds",
            mechanism_thresholds,
            None,
        ),
        (
            "certificate integrity, 1000 runs",
            certificate_integrity,
            None,
        ),
    ];
    let mut failed = 0;
    for (i, (label, check, limit)) in checks.iter().enumerate() {
        let start = Instant::now();
        let mut result = check();
        let took = start.elapsed();
        if let (Ok(()), Some(limit)) = (&result, limit) {
            if took > *limit {
                result = Err(format!("took {took:?}, limit {limit:?}"));
            }
        }
        match result {
            Ok(()) => println!("PASS {} {label} ({:.2?})", i + 1, took),
            Err(e) => {
                failed += 1;
                println!("FAIL {} {label} ({:.2?}): {e}", i + 1, took);
            }
        }
    }
    println!(
        "acceptance: {} of {} passed",
        checks.len() - failed,
        checks.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
