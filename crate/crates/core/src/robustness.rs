//! Robustness against a polytope of distributions given by its extreme
//! points.
//!
//! A rule is P-robust when, under every `p ∈ P`, some individual's
//! responsiveness exceeds one half (weakly P-robust: reaches one half).
//! The decision reduces to a theorem of the alternative on the matrix
//! `L_ij = E_{p_j}[φ(x)x_i]`.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::distribution::{Distribution, DistributionSet};
use crate::error::{Error, Result};
use crate::lp::{
    alternative_strict, alternative_weak, Alternative, Domain, LinearProgram, Relation, Sense,
};
use crate::profile::{DecisionProfile, Permutation};
use crate::rational::{self, Rational};
use crate::respond;
use crate::rule::VotingRule;

/// Largest n for which permutation invariance is checked exhaustively.
pub const MAX_PERMUTATION_VOTERS: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Strict,
    Weak,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Robust,
    NotRobust,
}

/// Either weights on individuals or a mixture over extreme points, each of
/// which can be re-checked without an LP.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RobustnessCertificate {
    pub mode: Mode,
    pub verdict: Verdict,
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
    pub mixture: Option<Vec<Rational>>,
}

impl RobustnessCertificate {
    pub fn is_robust(&self) -> bool {
        self.verdict == Verdict::Robust
    }

    /// Re-derives the certificate's inequalities from the rule and the
    /// extreme points.
    ///
    /// Robust: `w ≥ 0`, `Σw = 1` and `Σ w_i r_i(φ,p_j) > 1/2` (weak: `≥`)
    /// for every extreme point. Not robust: `λ ≥ 0`, `Σλ = 1` and
    /// `r_i(φ, Σλ_j p_j) ≤ 1/2` (weak: `<`) for every individual.
    pub fn verify(&self, rule: &VotingRule, pset: &DistributionSet) -> bool {
        if rule.n() != pset.n() {
            return false;
        }
        let half = rational::half();
        match (self.verdict, &self.weights, &self.mixture) {
            (Verdict::Robust, Some(w), None) => {
                if w.len() != rule.n() || !is_probability(w) {
                    return false;
                }
                pset.extreme_points().iter().all(|p| {
                    let Ok(r) = respond::responsiveness(rule, p) else {
                        return false;
                    };
                    let score = rational::dot(w, &r);
                    match self.mode {
                        Mode::Strict => score > half,
                        Mode::Weak => score >= half,
                    }
                })
            }
            (Verdict::NotRobust, None, Some(lambda)) => {
                if lambda.len() != pset.len() || !is_probability(lambda) {
                    return false;
                }
                let Ok(mix) = Distribution::mixture(pset.extreme_points(), lambda) else {
                    return false;
                };
                let Ok(r) = respond::responsiveness(rule, &mix) else {
                    return false;
                };
                r.iter().all(|ri| match self.mode {
                    Mode::Strict => *ri <= half,
                    Mode::Weak => *ri < half,
                })
            }
            _ => false,
        }
    }
}

fn is_probability(v: &[Rational]) -> bool {
    v.iter().all(|x| !x.is_negative()) && rational::sum(v).is_one()
}

/// `L_ij = E_{p_j}[φ(x)x_i]`, one row per individual.
pub fn expectation_matrix(rule: &VotingRule, pset: &DistributionSet) -> Result<Vec<Vec<Rational>>> {
    if rule.n() != pset.n() {
        return Err(Error::Dimension(format!(
            "rule has n = {}, distribution set has n = {}",
            rule.n(),
            pset.n()
        )));
    }
    let cols = pset
        .extreme_points()
        .iter()
        .map(|p| respond::expectations(rule, p))
        .collect::<Result<Vec<_>>>()?;
    Ok((0..rule.n())
        .map(|i| cols.iter().map(|c| c[i].clone()).collect())
        .collect())
}

/// `l_{i,x} = φ(x)x_i` over all profiles in ascending order: the matrix for
/// the degenerate distributions, read straight off the truth table.
pub fn truth_table_matrix(rule: &VotingRule) -> Vec<Vec<Rational>> {
    (1..=rule.n())
        .map(|i| {
            rule.profiles()
                .map(|x| rational::int(i64::from(rule.outcome(x) * x.vote(i))))
                .collect()
        })
        .collect()
}

fn certificate_from(mode: Mode, alt: Alternative) -> RobustnessCertificate {
    match alt {
        Alternative::Weights(w) => RobustnessCertificate {
            mode,
            verdict: Verdict::Robust,
            weights: Some(w),
            mixture: None,
        },
        Alternative::Mixture(l) => RobustnessCertificate {
            mode,
            verdict: Verdict::NotRobust,
            weights: None,
            mixture: Some(l),
        },
    }
}

fn certify_matrix(l: &[Vec<Rational>], mode: Mode) -> Result<RobustnessCertificate> {
    let alt = match mode {
        Mode::Strict => alternative_strict(l)?,
        Mode::Weak => alternative_weak(l)?,
    };
    Ok(certificate_from(mode, alt))
}

/// Decides (weak) P-robustness and returns a verified certificate. The
/// mixture of a negative answer is indexed like the extreme points.
pub fn certify_p_robust(
    rule: &VotingRule,
    pset: &DistributionSet,
    mode: Mode,
) -> Result<RobustnessCertificate> {
    let cert = certify_matrix(&expectation_matrix(rule, pset)?, mode)?;
    if !cert.verify(rule, pset) {
        return Err(Error::Internal(
            "robustness certificate failed verification".into(),
        ));
    }
    Ok(cert)
}

/// Robustness against every distribution, i.e. against the `2ⁿ`
/// degenerate distributions in ascending profile order.
pub fn is_robust(rule: &VotingRule) -> Result<RobustnessCertificate> {
    certify_matrix(&truth_table_matrix(rule), Mode::Strict)
}

/// Weak robustness against every distribution.
pub fn is_weakly_robust(rule: &VotingRule) -> Result<RobustnessCertificate> {
    certify_matrix(&truth_table_matrix(rule), Mode::Weak)
}

/// Robust when each individual may hold a different prior: some `i` has
/// `r_i(φ,p_i) > 1/2` for every choice of `p_1, …, p_n`. Individual `i`'s
/// worst prior is the degenerate one at a profile where `φ` overrides them,
/// so this holds exactly when some `i` is never overridden.
pub fn is_robust_heterogeneous(rule: &VotingRule) -> bool {
    (1..=rule.n()).any(|i| rule.profiles().all(|x| rule.outcome(x) == x.vote(i)))
}

/// The min-max value with a certificate for each side: the mixture keeps
/// every responsiveness at or below `value`, and the weights keep the
/// weighted responsiveness at or above `value` at every extreme point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinMax {
    #[serde(with = "rational::serde_rational")]
    pub value: Rational,
    #[serde(with = "rational::serde_rational_vec")]
    pub mixture: Vec<Rational>,
    #[serde(with = "rational::serde_rational_vec")]
    pub weights: Vec<Rational>,
}

impl MinMax {
    /// Checks both bounds against the responsiveness columns `r(φ, p_j)`.
    pub fn verify(&self, cols: &[Vec<Rational>]) -> bool {
        let n = cols.first().map_or(0, Vec::len);
        if self.mixture.len() != cols.len()
            || self.weights.len() != n
            || !is_probability(&self.mixture)
            || !is_probability(&self.weights)
        {
            return false;
        }
        let upper = (0..n).all(|i| {
            let ri = cols
                .iter()
                .zip(&self.mixture)
                .fold(Rational::zero(), |acc, (c, l)| acc + l * &c[i]);
            ri <= self.value
        });
        let lower = cols
            .iter()
            .all(|c| rational::dot(&self.weights, c) >= self.value);
        upper && lower
    }
}

/// `r(φ, p_j)` for every extreme point.
pub fn responsiveness_columns(
    rule: &VotingRule,
    pset: &DistributionSet,
) -> Result<Vec<Vec<Rational>>> {
    pset.extreme_points()
        .iter()
        .map(|p| respond::responsiveness(rule, p))
        .collect()
}

/// `min_{λ ∈ Δ(M)} max_i r_i(φ, Σ λ_j p_j)`, solved directly as an LP.
pub fn min_max_responsiveness(rule: &VotingRule, pset: &DistributionSet) -> Result<MinMax> {
    min_max_columns(&responsiveness_columns(rule, pset)?)
}

/// Same LP over precomputed responsiveness columns `r(φ, p_j)`.
pub(crate) fn min_max_columns(cols: &[Vec<Rational>]) -> Result<MinMax> {
    let m = cols.len();
    let n = cols.first().map_or(0, Vec::len);
    if m == 0 || n == 0 {
        return Err(Error::Dimension("empty responsiveness table".into()));
    }
    // Variables λ_1..λ_m ≥ 0, then t free.
    let mut domains = vec![Domain::NonNegative; m];
    domains.push(Domain::Free);
    let mut lp = LinearProgram::new(domains, Sense::Minimize);
    let mut objective = vec![Rational::zero(); m + 1];
    objective[m] = Rational::one();
    lp.set_objective(objective);
    for i in 0..n {
        let mut row: Vec<Rational> = cols.iter().map(|c| c[i].clone()).collect();
        row.push(-Rational::one());
        lp.add(row, Relation::Le, Rational::zero());
    }
    let mut norm = vec![Rational::one(); m];
    norm.push(Rational::zero());
    lp.add(norm, Relation::Eq, Rational::one());
    let (mut x, value) = lp
        .solve()
        .optimal()
        .ok_or_else(|| Error::Internal("min-max program has no optimum".into()))?;
    x.truncate(m);

    // The dual side: max v with Σ_i y_i r_i(p_j) ≥ v, y on the simplex.
    let mut domains = vec![Domain::NonNegative; n];
    domains.push(Domain::Free);
    let mut dual = LinearProgram::new(domains, Sense::Maximize);
    let mut objective = vec![Rational::zero(); n + 1];
    objective[n] = Rational::one();
    dual.set_objective(objective);
    for c in cols {
        let mut row = c.clone();
        row.push(-Rational::one());
        dual.add(row, Relation::Ge, Rational::zero());
    }
    let mut norm = vec![Rational::one(); n];
    norm.push(Rational::zero());
    dual.add(norm, Relation::Eq, Rational::one());
    let (mut y, dual_value) = dual
        .solve()
        .optimal()
        .ok_or_else(|| Error::Internal("min-max dual has no optimum".into()))?;
    y.truncate(n);
    let out = MinMax {
        value,
        mixture: x,
        weights: y,
    };
    if dual_value != out.value || !out.verify(cols) {
        return Err(Error::Internal("min-max bounds do not meet".into()));
    }
    Ok(out)
}

/// Whether `p_j^π` is again an extreme point for every `π` and `j`.
pub fn is_permutation_invariant(pset: &DistributionSet) -> Result<bool> {
    if pset.n() > MAX_PERMUTATION_VOTERS {
        return Err(Error::Precondition(format!(
            "permutation check limited to n ≤ {MAX_PERMUTATION_VOTERS}"
        )));
    }
    for pi in Permutation::all(pset.n()) {
        for p in pset.extreme_points() {
            if !pset.contains_point(&p.permuted(&pi)?) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnonymousVerdict {
    pub mode: Mode,
    pub verdict: Verdict,
    /// Mean responsiveness at each extreme point.
    #[serde(with = "rational::serde_rational_vec")]
    pub means: Vec<Rational>,
}

/// For an anonymous rule and a permutation-invariant set, robustness reduces
/// to the mean responsiveness at each extreme point.
pub fn certify_anonymous(
    rule: &VotingRule,
    pset: &DistributionSet,
    mode: Mode,
) -> Result<AnonymousVerdict> {
    if !rule.is_anonymous() {
        return Err(Error::Precondition("rule is not anonymous".into()));
    }
    if rule.n() != pset.n() {
        return Err(Error::Dimension(
            "rule and distribution set differ in n".into(),
        ));
    }
    if !pset.is_closed_under_relabeling()? {
        return Err(Error::Precondition(
            "distribution set is not permutation invariant".into(),
        ));
    }
    let means = pset
        .extreme_points()
        .iter()
        .map(|p| respond::mean_responsiveness_by_count(rule, &p.count_probs()))
        .collect::<Result<Vec<_>>>()?;
    let half = rational::half();
    let ok = means.iter().all(|m| match mode {
        Mode::Strict => *m > half,
        Mode::Weak => *m >= half,
    });
    Ok(AnonymousVerdict {
        mode,
        verdict: if ok {
            Verdict::Robust
        } else {
            Verdict::NotRobust
        },
        means,
    })
}

/// The one-dissenter degenerate distributions: `p_i` puts all mass on the
/// profile where only individual `i` votes `−1`.
pub fn one_dissenter_points(n: usize) -> Result<Vec<Distribution>> {
    (1..=n)
        .map(|i| {
            let all_plus = DecisionProfile::new(n, (1 << n) - 1)?;
            Ok(Distribution::degenerate(all_plus.with_vote(i, -1)))
        })
        .collect()
}
