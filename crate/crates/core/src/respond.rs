//! Responsiveness: the probability that an individual's vote agrees with the
//! collective decision.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::profile::DecisionProfile;
use crate::rational::{self, Rational};
use crate::rule::{RandomVotingRule, VotingRule};

fn check_n(rule_n: usize, dist_n: usize) -> Result<()> {
    if rule_n != dist_n {
        return Err(Error::Dimension(format!(
            "rule has n = {rule_n}, distribution has n = {dist_n}"
        )));
    }
    Ok(())
}

/// `E_p[φ(x)·x_i]` for each individual, with `φ` given as a rational outcome.
fn expectations_with(
    n: usize,
    p: &Distribution,
    outcome: impl Fn(DecisionProfile) -> Rational,
) -> Vec<Rational> {
    let mut e = vec![Rational::zero(); n];
    for (x, px) in p.support() {
        let phi = outcome(x);
        if phi.is_zero() {
            continue;
        }
        let weighted = &phi * px;
        for (i, ei) in e.iter_mut().enumerate() {
            if x.vote(i + 1) > 0 {
                *ei += &weighted;
            } else {
                *ei -= &weighted;
            }
        }
    }
    e
}

/// `E_p[φ(x)·x_i]`, `i = 1..=n`.
pub fn expectations(rule: &VotingRule, p: &Distribution) -> Result<Vec<Rational>> {
    check_n(rule.n(), p.n())?;
    Ok(expectations_with(rule.n(), p, |x| {
        rational::int(rule.outcome(x).into())
    }))
}

/// `E_p[φ̄(x)·x_i]`, `i = 1..=n`.
pub fn expectations_random(rule: &RandomVotingRule, p: &Distribution) -> Result<Vec<Rational>> {
    check_n(rule.n(), p.n())?;
    Ok(expectations_with(rule.n(), p, |x| rule.outcome(x).clone()))
}

fn from_expectations(e: Vec<Rational>) -> Vec<Rational> {
    e.into_iter()
        .map(|v| (v + Rational::one()) / rational::int(2))
        .collect()
}

/// `r_i = p({x : φ(x) = x_i})`, computed by direct mass.
pub fn agreement_mass(rule: &VotingRule, p: &Distribution) -> Result<Vec<Rational>> {
    check_n(rule.n(), p.n())?;
    let mut r = vec![Rational::zero(); rule.n()];
    for (x, px) in p.support() {
        let phi = rule.outcome(x);
        for (i, ri) in r.iter_mut().enumerate() {
            if x.vote(i + 1) == phi {
                *ri += px;
            }
        }
    }
    Ok(r)
}

/// Responsiveness of every individual under a deterministic rule.
///
/// Both the expectation form and the mass form are evaluated; a mismatch is
/// reported as an internal error.
pub fn responsiveness(rule: &VotingRule, p: &Distribution) -> Result<Vec<Rational>> {
    let by_expectation = from_expectations(expectations(rule, p)?);
    let by_mass = agreement_mass(rule, p)?;
    if by_expectation != by_mass {
        return Err(Error::Internal("responsiveness formulas disagree".into()));
    }
    Ok(by_mass)
}

/// Responsiveness under a random rule, `(E_p[φ̄(x)x_i] + 1)/2`.
pub fn responsiveness_random(rule: &RandomVotingRule, p: &Distribution) -> Result<Vec<Rational>> {
    Ok(from_expectations(expectations_random(rule, p)?))
}

/// `d_k`: the number of individuals agreeing with an anonymous rule when
/// exactly `k` vote `+1`.
pub fn agreement_counts(rule: &VotingRule) -> Result<Vec<usize>> {
    let by_count = rule
        .outcome_by_count()
        .ok_or_else(|| Error::Precondition("rule is not anonymous".into()))?;
    let n = rule.n();
    Ok(by_count
        .iter()
        .enumerate()
        .map(|(k, &o)| if o > 0 { k } else { n - k })
        .collect())
}

/// `Σ_k d_k·p_k / n` for an anonymous rule and count probabilities
/// `p_0, …, p_n`.
pub fn mean_responsiveness_by_count(
    rule: &VotingRule,
    count_probs: &[Rational],
) -> Result<Rational> {
    let d = agreement_counts(rule)?;
    if count_probs.len() != d.len() {
        return Err(Error::Dimension(format!(
            "{} count probabilities for n = {}",
            count_probs.len(),
            rule.n()
        )));
    }
    if count_probs.iter().any(Signed::is_negative) || !rational::sum(count_probs).is_one() {
        return Err(Error::invalid("count_probs", "not a probability vector"));
    }
    let total = d
        .iter()
        .zip(count_probs)
        .fold(Rational::zero(), |acc, (&dk, pk)| {
            acc + rational::int(dk as i64) * pk
        });
    Ok(total / rational::int(rule.n() as i64))
}

/// Arithmetic mean of a responsiveness vector.
pub fn mean(r: &[Rational]) -> Rational {
    rational::sum(r) / rational::int(r.len() as i64)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RtfMax {
    /// `max_φ Σ w_i E_p[φ(x)x_i]`.
    #[serde(with = "rational::serde_rational")]
    pub value: Rational,
    /// The same maximum in responsiveness terms, `max_φ Σ w_i r_i(φ,p)`.
    #[serde(with = "rational::serde_rational")]
    pub responsiveness_value: Rational,
    /// The sign rule; ties go to `+1`.
    #[serde(serialize_with = "serialize_rule_table")]
    pub argmax: VotingRule,
}

fn serialize_rule_table<S: serde::Serializer>(
    r: &VotingRule,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.table_string())
}

fn weighted_sum(weights: &[Rational], x: DecisionProfile) -> Rational {
    weights
        .iter()
        .enumerate()
        .fold(Rational::zero(), |acc, (i, w)| {
            if x.vote(i + 1) > 0 {
                acc + w
            } else {
                acc - w
            }
        })
}

/// The sign rule `x ↦ sign(Σ w_i x_i)`, ties to `+1`.
pub fn sign_rule(weights: &[Rational]) -> Result<VotingRule> {
    VotingRule::from_fn(weights.len(), |x| {
        if weighted_sum(weights, x).is_negative() {
            -1
        } else {
            1
        }
    })
}

/// Maximum over all deterministic rules of `Σ w_i E_p[φ(x)x_i]`.
///
/// The value is computed as `E_p[|Σ w_i x_i|]` and, independently, as the
/// objective of the sign rule; the two must coincide.
pub fn rtf_max_weighted(weights: &[Rational], p: &Distribution) -> Result<RtfMax> {
    check_n(weights.len(), p.n())?;
    if weights.iter().all(Zero::is_zero) {
        return Err(Error::invalid("weights", "all zero"));
    }
    let value = p.support().fold(Rational::zero(), |acc, (x, px)| {
        acc + weighted_sum(weights, x).abs() * px
    });
    let argmax = sign_rule(weights)?;
    let attained = rational::dot(weights, &expectations(&argmax, p)?);
    if attained != value {
        return Err(Error::Internal("sign rule does not attain E|Σw x|".into()));
    }
    let responsiveness_value = (&value + rational::sum(weights)) / rational::int(2);
    Ok(RtfMax {
        value,
        responsiveness_value,
        argmax,
    })
}
