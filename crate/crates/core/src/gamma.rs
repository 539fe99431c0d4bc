//! Rules used as mechanisms: sincere voting, the thresholds on utility
//! heterogeneity, and the uniform utility mixture that defeats every
//! non-dictatorial rule.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::distribution::{Distribution, DistributionSet};
use crate::enumerate::{self, Predicate};
use crate::error::{Error, Result};
use crate::profile::check_voters;
use crate::rational::{self, ExtendedRational, Rational};
use crate::respond;
use crate::robustness;
use crate::rule::{Monotonicity, VotingRule};

/// Sincere voting is a best response exactly when no individual can turn
/// the outcome against their own vote by voting for it.
pub fn is_strategy_proof(rule: &VotingRule) -> Monotonicity {
    rule.own_vote_monotonicity()
}

/// `g(r) = (2r − 1)/(1 − r)`, with `g(1) = +∞`.
pub fn g(r: &Rational) -> Result<ExtendedRational> {
    if *r > Rational::one() {
        return Err(Error::invalid("responsiveness", "above 1"));
    }
    if r.is_one() {
        return Ok(ExtendedRational::Infinity);
    }
    let two = rational::int(2);
    Ok(ExtendedRational::Finite(
        (&two * r - Rational::one()) / (Rational::one() - r),
    ))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EpsilonLower {
    pub value: ExtendedRational,
    /// Table of a robust rule attaining the minimum.
    pub attained_by: String,
    #[serde(with = "rational::serde_rational")]
    pub min_max_responsiveness: Rational,
}

/// Minimum over robust rules of `g(min_p max_i r_i(φ,p))`.
pub fn epsilon_lower(n: usize) -> Result<EpsilonLower> {
    let robust = enumerate::enumerate_rules(n, &Predicate::Robust.into())?;
    let degenerates = DistributionSet::all_degenerate(n)?;
    let mut best: Option<EpsilonLower> = None;
    for rule in &robust {
        let mm = robustness::min_max_responsiveness(rule, &degenerates)?.value;
        let value = g(&mm)?;
        if best.as_ref().is_none_or(|b| value < b.value) {
            best = Some(EpsilonLower {
                value,
                attained_by: rule.table_string(),
                min_max_responsiveness: mm,
            });
        }
    }
    let best = best.ok_or_else(|| Error::Internal("no robust rule found".into()))?;
    if !best.value.is_positive() {
        return Err(Error::Internal("lower threshold is not positive".into()));
    }
    Ok(best)
}

/// `2ⁿ − 2`.
pub fn epsilon_upper(n: usize) -> Result<Rational> {
    check_voters(n)?;
    Ok(rational::int((1i64 << n) - 2))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UtilityProfile {
    pub profile: String,
    /// `(u_i(+1), u_i(−1))` for each individual.
    pub utilities: Vec<[String; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GammaWitness {
    pub n: usize,
    pub mixture: &'static str,
    pub profiles: Vec<UtilityProfile>,
    #[serde(with = "rational::serde_rational_vec")]
    pub responsiveness: Vec<Rational>,
    /// Expected utility of `φ` minus that of its inverse, per individual.
    #[serde(with = "rational::serde_rational_vec")]
    pub net_gains: Vec<Rational>,
}

/// The utility pair of individual `i` at profile `x`: the preferred
/// alternative is worth `1/(2ⁿ − 1)` if the rule picks it and `1` if not.
fn utility_pair(n: usize, vote: i8, outcome: i8) -> [Rational; 2] {
    let small = rational::ratio(1, (1i64 << n) - 1);
    let (pref, other) = if vote == outcome {
        (small, Rational::zero())
    } else {
        (Rational::one(), Rational::zero())
    };
    if vote > 0 {
        [pref, other]
    } else {
        [other, pref]
    }
}

/// Builds the uniform mixture over the utility profiles `u^x` and checks
/// that no individual gains in expectation from `φ` over its inverse.
pub fn gamma_counterexample(rule: &VotingRule) -> Result<GammaWitness> {
    if let Some(i) = rule.dictator_index() {
        return Err(Error::Precondition(format!(
            "rule is a dictatorship of {i}"
        )));
    }
    let n = rule.n();
    let k = rational::int((1i64 << n) - 1);
    let share = rational::ratio(1, 1i64 << n);
    let mut direct = vec![Rational::zero(); n];
    let mut profiles = Vec::with_capacity(1 << n);
    for x in rule.profiles() {
        let phi = rule.outcome(x);
        let mut utilities = Vec::with_capacity(n);
        for (i, gain) in direct.iter_mut().enumerate() {
            let u = utility_pair(n, x.vote(i + 1), phi);
            let (chosen, rejected) = if phi > 0 {
                (&u[0], &u[1])
            } else {
                (&u[1], &u[0])
            };
            *gain += (chosen - rejected) * &share;
            utilities.push([rational::format(&u[0]), rational::format(&u[1])]);
        }
        profiles.push(UtilityProfile {
            profile: x.to_string(),
            utilities,
        });
    }
    let responsiveness = respond::responsiveness(rule, &Distribution::uniform(n)?)?;
    let by_formula: Vec<Rational> = responsiveness
        .iter()
        .map(|r| r / &k - (Rational::one() - r))
        .collect();
    if by_formula != direct {
        return Err(Error::Internal(
            "net gain formula disagrees with the table".into(),
        ));
    }
    if direct.iter().any(|v| *v > Rational::zero()) {
        return Err(Error::Internal(
            "positive net gain without a dictator".into(),
        ));
    }
    Ok(GammaWitness {
        n,
        mixture: "uniform over the utility profiles u^x, one per decision profile x",
        profiles,
        responsiveness,
        net_gains: direct,
    })
}
