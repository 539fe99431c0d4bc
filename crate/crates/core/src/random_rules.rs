//! Robustness of random voting rules and the rules that beat them.
//!
//! A random rule is robust when under every distribution some individual
//! has `E_p[φ̄(x)x_i] > 0`. With `L̄_{i,x} = φ̄(x)x_i` this is the strict
//! alternative on `L̄`: either `w ≥ 0` with `Σ_i w_i φ̄(x)x_i > 0` at every
//! profile, so `φ̄(x)` and `Σ w_i x_i` share a nonzero sign everywhere, or a
//! distribution under which nobody's responsiveness exceeds one half.

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::lp::{alternative_strict, Alternative, FeasibilityResult, LinearSystem, Rel};
use crate::profile::DecisionProfile;
use crate::rational::{self, Rational};
use crate::respond;
use crate::rule::{RandomVotingRule, VotingRule};

/// Largest n for which rival deterministic rules are enumerated.
pub const MAX_SEARCH_VOTERS: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomRobustness {
    pub robust: bool,
    /// Integer weights whose weighted vote sum has the sign of `φ̄`.
    #[serde(default, with = "rational::serde_opt_rational_vec")]
    pub weights: Option<Vec<Rational>>,
    /// A distribution under which every responsiveness is at most one half,
    /// as probabilities over all profiles.
    #[serde(default, with = "rational::serde_opt_rational_vec")]
    pub counterexample: Option<Vec<Rational>>,
}

impl RandomRobustness {
    pub fn verify(&self, rule: &RandomVotingRule) -> bool {
        match (self.robust, &self.weights, &self.counterexample) {
            (true, Some(w), None) => sign_pattern_holds(rule, w),
            (false, None, Some(probs)) => {
                let Ok(p) = Distribution::new(rule.n(), probs.clone()) else {
                    return false;
                };
                respond::expectations_random(rule, &p)
                    .map(|e| e.iter().all(|v| !v.is_positive()))
                    .unwrap_or(false)
            }
            _ => false,
        }
    }
}

/// `w ≥ 0` and `φ̄(x)·Σ w_i x_i > 0` at every profile.
pub fn sign_pattern_holds(rule: &RandomVotingRule, w: &[Rational]) -> bool {
    w.len() == rule.n()
        && w.iter().all(|v| !v.is_negative())
        && rule.profiles().all(|x| {
            let s = (1..=rule.n()).fold(Rational::zero(), |acc, i| {
                if x.vote(i) > 0 {
                    acc + &w[i - 1]
                } else {
                    acc - &w[i - 1]
                }
            });
            (rule.outcome(x) * s).is_positive()
        })
}

fn sign_matrix(rule: &RandomVotingRule) -> Vec<Vec<Rational>> {
    (1..=rule.n())
        .map(|i| {
            rule.profiles()
                .map(|x| {
                    let o = rule.outcome(x);
                    if x.vote(i) > 0 {
                        o.clone()
                    } else {
                        -o
                    }
                })
                .collect()
        })
        .collect()
}

pub fn is_robust_random(rule: &RandomVotingRule) -> Result<RandomRobustness> {
    let out = match alternative_strict(&sign_matrix(rule))? {
        Alternative::Weights(w) => RandomRobustness {
            robust: true,
            weights: Some(rational::clear_denominators(&w)),
            counterexample: None,
        },
        Alternative::Mixture(p) => RandomRobustness {
            robust: false,
            weights: None,
            counterexample: Some(p),
        },
    };
    if !out.verify(rule) {
        return Err(Error::Internal(
            "random robustness certificate failed".into(),
        ));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Domination {
    pub rule: VotingRule,
    pub distribution: Distribution,
}

/// Looks for `p` with `E_p[(φ(x) − φ̄(x))x_i] > 0` for every `i`.
pub fn dominating_distribution(
    rule: &VotingRule,
    random: &RandomVotingRule,
) -> Result<Option<Distribution>> {
    let n = rule.n();
    if random.n() != n {
        return Err(Error::Dimension("rules differ in n".into()));
    }
    let diffs: Vec<Rational> = rule
        .profiles()
        .map(|x| rational::int(rule.outcome(x).into()) - random.outcome(x))
        .collect();
    if diffs.iter().all(Zero::is_zero) {
        return Ok(None);
    }
    let mut sys = LinearSystem::nonnegative(1 << n);
    for i in 1..=n {
        let coeffs = DecisionProfile::all(n)
            .map(|x| {
                let d = &diffs[x.index()];
                if x.vote(i) > 0 {
                    d.clone()
                } else {
                    -d
                }
            })
            .collect();
        sys.push(coeffs, Rel::Gt, Rational::zero())?;
    }
    sys.push(vec![Rational::one(); 1 << n], Rel::Eq, Rational::one())?;
    match sys.solve()? {
        FeasibilityResult::Feasible { witness } => Ok(Some(Distribution::new(n, witness)?)),
        FeasibilityResult::Infeasible { .. } => Ok(None),
    }
}

/// The first deterministic rule, in ascending truth-table order, that is
/// strictly Pareto-preferred to `random` under some distribution.
pub fn find_dominating_deterministic(random: &RandomVotingRule) -> Result<Option<Domination>> {
    let n = random.n();
    if n > MAX_SEARCH_VOTERS {
        return Err(Error::Precondition(format!(
            "rival search limited to n ≤ {MAX_SEARCH_VOTERS}"
        )));
    }
    let count = 1u64 << (1u64 << n);
    let found = (0..count)
        .into_par_iter()
        .map(|code| -> Result<Option<Domination>> {
            let rule = VotingRule::from_code(n, code)?;
            Ok(dominating_distribution(&rule, random)?
                .map(|distribution| Domination { rule, distribution }))
        })
        .find_map_first(|r| match r {
            Ok(None) => None,
            other => Some(other),
        });
    let Some(hit) = found.transpose()?.flatten() else {
        return Ok(None);
    };
    let r_det = respond::responsiveness(&hit.rule, &hit.distribution)?;
    let r_rand = respond::responsiveness_random(random, &hit.distribution)?;
    if !r_det.iter().zip(&r_rand).all(|(a, b)| a > b) {
        return Err(Error::Internal(
            "dominating pair failed verification".into(),
        ));
    }
    Ok(Some(hit))
}

/// Uniform distribution over the profiles with exactly `n/2` votes for `+1`,
/// under which every anonymous random rule gives each individual
/// responsiveness one half.
pub fn anonymous_even_impossibility(n: usize) -> Result<Distribution> {
    if !n.is_multiple_of(2) {
        return Err(Error::Precondition(format!("n must be even, got {n}")));
    }
    Distribution::uniform_over(n, |x| x.count_plus() == n / 2)
}
