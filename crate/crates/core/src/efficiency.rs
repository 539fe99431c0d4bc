//! Pareto comparisons in responsiveness and the three efficiency notions
//! for deterministic rules against all random rules.
//!
//! The efficiency programs substitute `v_x = 1 − φ(x)φ̄(x) ∈ [0, 2]`, so
//! `φ̄ = φ` is `v = 0` and the gain of individual `i` is
//! `E_p[(φ̄ − φ)x_i] = −Σ_x p(x)φ(x)x_i v_x`.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::lp::{FeasibilityResult, LinearProgram, LinearSystem, Rel, Relation, Sense};
use crate::rational::{self, Rational};
use crate::respond;
use crate::rule::{AnyRule, RandomVotingRule, VotingRule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParetoRelation {
    /// Every individual strictly better off.
    StrictlyPreferred,
    /// Nobody worse off, somebody better off, not everybody.
    Preferred,
    Equal,
    Incomparable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    A,
    B,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParetoVerdict {
    pub relation: ParetoRelation,
    /// The preferred rule, for `strictly_preferred` and `preferred`.
    pub direction: Option<Side>,
    /// `r_i(a,p) − r_i(b,p)`.
    #[serde(with = "rational::serde_rational_vec")]
    pub deltas: Vec<Rational>,
}

impl ParetoVerdict {
    fn from_deltas(deltas: Vec<Rational>) -> Self {
        let all = |f: fn(&Rational) -> bool| deltas.iter().all(f);
        let (relation, direction) = if all(Zero::is_zero) {
            (ParetoRelation::Equal, None)
        } else if all(Signed::is_positive) {
            (ParetoRelation::StrictlyPreferred, Some(Side::A))
        } else if all(Signed::is_negative) {
            (ParetoRelation::StrictlyPreferred, Some(Side::B))
        } else if all(|d| !d.is_negative()) {
            (ParetoRelation::Preferred, Some(Side::A))
        } else if all(|d| !d.is_positive()) {
            (ParetoRelation::Preferred, Some(Side::B))
        } else {
            (ParetoRelation::Incomparable, None)
        };
        ParetoVerdict {
            relation,
            direction,
            deltas,
        }
    }

    /// `r_i(a) ≥ r_i(b)` for every `i`.
    pub fn a_weakly_preferred(&self) -> bool {
        self.deltas.iter().all(|d| !d.is_negative())
    }

    /// `r_i(b) ≥ r_i(a)` for every `i`.
    pub fn b_weakly_preferred(&self) -> bool {
        self.deltas.iter().all(|d| !d.is_positive())
    }

    pub fn a_strictly_preferred(&self) -> bool {
        self.relation == ParetoRelation::StrictlyPreferred && self.direction == Some(Side::A)
    }
}

fn any_responsiveness(rule: &AnyRule, p: &Distribution) -> Result<Vec<Rational>> {
    match rule {
        AnyRule::Deterministic(r) => respond::responsiveness(r, p),
        AnyRule::Random(r) => respond::responsiveness_random(r, p),
    }
}

/// Compares two rules by their responsiveness vectors under `p`.
pub fn pareto_compare(a: &AnyRule, b: &AnyRule, p: &Distribution) -> Result<ParetoVerdict> {
    if a.n() != b.n() {
        return Err(Error::Dimension("rules differ in n".into()));
    }
    let ra = any_responsiveness(a, p)?;
    let rb = any_responsiveness(b, p)?;
    Ok(ParetoVerdict::from_deltas(
        ra.iter().zip(&rb).map(|(x, y)| x - y).collect(),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EfficiencyMode {
    /// No other random rule is weakly Pareto-preferred.
    Strict,
    /// No random rule is Pareto-preferred.
    Plain,
    /// No random rule is strictly Pareto-preferred.
    Weak,
}

impl fmt::Display for EfficiencyMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EfficiencyMode::Strict => "strict",
            EfficiencyMode::Plain => "plain",
            EfficiencyMode::Weak => "weak",
        })
    }
}

impl FromStr for EfficiencyMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strict" => Ok(EfficiencyMode::Strict),
            "plain" => Ok(EfficiencyMode::Plain),
            "weak" => Ok(EfficiencyMode::Weak),
            _ => Err(Error::invalid(
                "mode",
                format!("{s:?} is not strict|plain|weak"),
            )),
        }
    }
}

/// An efficiency verdict with its certificate.
///
/// Efficient verdicts carry weights `y` with `Σ_i y_i p(x)φ(x)x_i` of the
/// right sign at every profile: `≥ 0` with `y ≫ 0` (plain), `≥ 0` with
/// `y ≥ 0`, `Σy = 1` (weak), `> 0` with `y ≥ 0` (strict). Inefficient
/// verdicts carry the improving random rule and its gains.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EfficiencyResult {
    pub mode: EfficiencyMode,
    pub efficient: bool,
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        with = "rational::serde_opt_rational_vec"
    )]
    pub weights: Option<Vec<Rational>>,
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        with = "rational::serde_opt_rational_vec"
    )]
    pub improvement: Option<Vec<Rational>>,
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        with = "rational::serde_opt_rational_vec"
    )]
    pub gains: Option<Vec<Rational>>,
}

impl EfficiencyResult {
    pub fn improvement_rule(&self, n: usize) -> Option<RandomVotingRule> {
        RandomVotingRule::new(n, self.improvement.clone()?).ok()
    }

    /// Re-checks the certificate from `φ` and `p` alone.
    pub fn verify(&self, rule: &VotingRule, p: &Distribution) -> bool {
        if rule.n() != p.n() {
            return false;
        }
        match (self.efficient, &self.weights, &self.improvement) {
            (true, Some(y), None) => weights_certify(self.mode, rule, p, y),
            (false, None, Some(table)) => {
                let Ok(better) = RandomVotingRule::new(rule.n(), table.clone()) else {
                    return false;
                };
                let Ok(gains) = gains(rule, &better, p) else {
                    return false;
                };
                if self.gains.as_ref() != Some(&gains) {
                    return false;
                }
                match self.mode {
                    EfficiencyMode::Strict => {
                        better != rule.to_random() && gains.iter().all(|g| !g.is_negative())
                    }
                    EfficiencyMode::Plain => {
                        gains.iter().all(|g| !g.is_negative())
                            && gains.iter().any(Signed::is_positive)
                    }
                    EfficiencyMode::Weak => gains.iter().all(Signed::is_positive),
                }
            }
            _ => false,
        }
    }
}

/// `a_{i,x} = p(x)φ(x)x_i`.
fn gain_matrix(rule: &VotingRule, p: &Distribution) -> Vec<Vec<Rational>> {
    (1..=rule.n())
        .map(|i| {
            rule.profiles()
                .map(|x| {
                    let s = i64::from(rule.outcome(x) * x.vote(i));
                    p.prob(x) * rational::int(s)
                })
                .collect()
        })
        .collect()
}

/// `E_p[(φ̄ − φ)x_i]` for each individual.
pub fn gains(
    rule: &VotingRule,
    better: &RandomVotingRule,
    p: &Distribution,
) -> Result<Vec<Rational>> {
    let new = respond::expectations_random(better, p)?;
    let old = respond::expectations(rule, p)?;
    Ok(new.iter().zip(&old).map(|(a, b)| a - b).collect())
}

fn weights_certify(
    mode: EfficiencyMode,
    rule: &VotingRule,
    p: &Distribution,
    y: &[Rational],
) -> bool {
    if y.len() != rule.n() || y.iter().any(Signed::is_negative) {
        return false;
    }
    let a = gain_matrix(rule, p);
    let cols: Vec<Rational> = (0..1usize << rule.n())
        .map(|x| {
            a.iter()
                .zip(y)
                .fold(Rational::zero(), |acc, (row, yi)| acc + yi * &row[x])
        })
        .collect();
    match mode {
        EfficiencyMode::Strict => cols.iter().all(Signed::is_positive),
        EfficiencyMode::Plain => {
            y.iter().all(Signed::is_positive) && cols.iter().all(|c| !c.is_negative())
        }
        EfficiencyMode::Weak => rational::sum(y).is_one() && cols.iter().all(|c| !c.is_negative()),
    }
}

fn check_n(rule: &VotingRule, p: &Distribution) -> Result<()> {
    if rule.n() != p.n() {
        return Err(Error::Dimension("rule and distribution differ in n".into()));
    }
    Ok(())
}

/// Solves the improvement program for `mode`; returns `v` when some random
/// rule improves on `φ`.
fn improvement_search(mode: EfficiencyMode, a: &[Vec<Rational>]) -> Result<Option<Vec<Rational>>> {
    let n = a.len();
    let k = a[0].len();
    let extra = match mode {
        EfficiencyMode::Strict => 0,
        EfficiencyMode::Plain => n,
        EfficiencyMode::Weak => 1,
    };
    let mut lp = LinearProgram::nonnegative(k + extra, Sense::Maximize);
    let mut objective = vec![Rational::zero(); k + extra];
    match mode {
        EfficiencyMode::Strict => objective[..k].fill(Rational::one()),
        _ => objective[k..].fill(Rational::one()),
    }
    lp.set_objective(objective);
    for (i, row) in a.iter().enumerate() {
        // gain_i = −a_i·v must cover s_i (plain), t (weak) or be ≥ 0.
        let mut coeffs = row.clone();
        coeffs.resize(k + extra, Rational::zero());
        match mode {
            EfficiencyMode::Strict => {}
            EfficiencyMode::Plain => coeffs[k + i] = Rational::one(),
            EfficiencyMode::Weak => coeffs[k] = Rational::one(),
        }
        lp.add(coeffs, Relation::Le, Rational::zero());
    }
    for x in 0..k {
        let mut e = vec![Rational::zero(); k + extra];
        e[x] = Rational::one();
        lp.add(e, Relation::Le, rational::int(2));
    }
    if mode == EfficiencyMode::Weak {
        // Keep t bounded; any positive t already proves inefficiency.
        let mut e = vec![Rational::zero(); k + extra];
        e[k] = Rational::one();
        lp.add(e, Relation::Le, Rational::one());
    }
    let (x, value) = lp
        .solve()
        .optimal()
        .ok_or_else(|| Error::Internal("efficiency program has no optimum".into()))?;
    Ok(if value.is_positive() {
        Some(x[..k].to_vec())
    } else {
        None
    })
}

fn weights_search(mode: EfficiencyMode, a: &[Vec<Rational>]) -> Result<Option<Vec<Rational>>> {
    let n = a.len();
    let k = a[0].len();
    let mut sys = LinearSystem::nonnegative(n);
    let rel = if mode == EfficiencyMode::Strict {
        Rel::Gt
    } else {
        Rel::Ge
    };
    for x in 0..k {
        let col: Vec<Rational> = a.iter().map(|row| row[x].clone()).collect();
        if mode != EfficiencyMode::Strict && col.iter().all(Zero::is_zero) {
            continue;
        }
        sys.push(col, rel, Rational::zero())?;
    }
    match mode {
        EfficiencyMode::Strict => {}
        EfficiencyMode::Plain => {
            for i in 0..n {
                let mut e = vec![Rational::zero(); n];
                e[i] = Rational::one();
                sys.push(e, Rel::Ge, Rational::one())?;
            }
        }
        EfficiencyMode::Weak => sys.push(vec![Rational::one(); n], Rel::Eq, Rational::one())?,
    }
    Ok(match sys.solve()? {
        FeasibilityResult::Feasible { witness } => Some(witness),
        FeasibilityResult::Infeasible { .. } => None,
    })
}

/// Decides efficiency of `rule` under `p` in the given sense.
///
/// The verdict comes from the improvement program; the certificate for an
/// efficient verdict from an independent weight system. Disagreement between
/// the two is an internal error.
pub fn efficiency(
    rule: &VotingRule,
    p: &Distribution,
    mode: EfficiencyMode,
) -> Result<EfficiencyResult> {
    check_n(rule, p)?;
    let a = gain_matrix(rule, p);
    let improvement = improvement_search(mode, &a)?;
    let weights = weights_search(mode, &a)?;
    let result = match (improvement, weights) {
        (None, Some(y)) => EfficiencyResult {
            mode,
            efficient: true,
            weights: Some(y),
            improvement: None,
            gains: None,
        },
        (Some(v), None) => {
            let table: Vec<Rational> = rule
                .outcomes()
                .iter()
                .zip(&v)
                .map(|(&phi, vx)| rational::int(phi.into()) * (Rational::one() - vx))
                .collect();
            let better = RandomVotingRule::new(rule.n(), table.clone())?;
            EfficiencyResult {
                mode,
                efficient: false,
                weights: None,
                improvement: Some(table),
                gains: Some(gains(rule, &better, p)?),
            }
        }
        _ => {
            return Err(Error::Internal(format!(
                "{mode} efficiency verdict and certificate disagree"
            )))
        }
    };
    if !result.verify(rule, p) {
        return Err(Error::Internal(format!(
            "{mode} efficiency certificate failed"
        )));
    }
    Ok(result)
}

pub fn is_strictly_efficient(rule: &VotingRule, p: &Distribution) -> Result<EfficiencyResult> {
    efficiency(rule, p, EfficiencyMode::Strict)
}

pub fn is_efficient(rule: &VotingRule, p: &Distribution) -> Result<EfficiencyResult> {
    efficiency(rule, p, EfficiencyMode::Plain)
}

pub fn is_weakly_efficient(rule: &VotingRule, p: &Distribution) -> Result<EfficiencyResult> {
    efficiency(rule, p, EfficiencyMode::Weak)
}

/// `q(x) = p(x)α(x)/Q` with `α(x) = (1 − φ̄(x)φ(x))/2`, the distribution
/// under which the inverse of `φ` does at least as well as `φ` for everyone
/// whenever `φ̄` does so under `p`.
pub fn transport_distribution(
    p: &Distribution,
    rule: &VotingRule,
    better: &RandomVotingRule,
) -> Result<Distribution> {
    check_n(rule, p)?;
    if better.n() != rule.n() {
        return Err(Error::Dimension("random rule differs in n".into()));
    }
    if gains(rule, better, p)?.iter().any(Signed::is_negative) {
        return Err(Error::Precondition(
            "random rule is not weakly Pareto-preferred under p".into(),
        ));
    }
    let weighted: Vec<Rational> = rule
        .profiles()
        .map(|x| {
            let phi = rational::int(rule.outcome(x).into());
            let alpha = (Rational::one() - better.outcome(x) * phi) / rational::int(2);
            p.prob(x) * alpha
        })
        .collect();
    let q_total = rational::sum(&weighted);
    if q_total.is_zero() {
        return Err(Error::Precondition(
            "Q = 0: the random rule equals the rule almost surely".into(),
        ));
    }
    Distribution::new(p.n(), weighted.iter().map(|w| w / &q_total).collect())
}
