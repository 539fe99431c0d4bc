//! Weighted-majority representations: find `w` with `φ(x)·Σ w_i x_i ≥ 0`
//! (or `> 0` when ties are forbidden) at every profile.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lp::{FeasibilityResult, LinearSystem, Rel, VarSign};
use crate::rational::{self, Rational};
use crate::robustness::{self, RobustnessCertificate};
use crate::rule::{Monotonicity, VotingRule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SignClass {
    Free,
    #[serde(rename = "nonneg")]
    NonNegative,
    Positive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ties {
    Allowed,
    #[serde(rename = "none")]
    Forbidden,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WmrQuery {
    pub signs: SignClass,
    pub ties: Ties,
}

impl WmrQuery {
    pub const fn new(signs: SignClass, ties: Ties) -> Self {
        WmrQuery { signs, ties }
    }

    pub const ALL: [WmrQuery; 6] = [
        WmrQuery::new(SignClass::Free, Ties::Allowed),
        WmrQuery::new(SignClass::Free, Ties::Forbidden),
        WmrQuery::new(SignClass::NonNegative, Ties::Allowed),
        WmrQuery::new(SignClass::NonNegative, Ties::Forbidden),
        WmrQuery::new(SignClass::Positive, Ties::Allowed),
        WmrQuery::new(SignClass::Positive, Ties::Forbidden),
    ];
}

impl fmt::Display for SignClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SignClass::Free => "free",
            SignClass::NonNegative => "nonneg",
            SignClass::Positive => "positive",
        })
    }
}

impl FromStr for SignClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "free" => Ok(SignClass::Free),
            "nonneg" | "nonnegative" => Ok(SignClass::NonNegative),
            "positive" => Ok(SignClass::Positive),
            _ => Err(Error::invalid(
                "signs",
                format!("{s:?} is not free|nonneg|positive"),
            )),
        }
    }
}

impl fmt::Display for Ties {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Ties::Allowed => "allowed",
            Ties::Forbidden => "none",
        })
    }
}

impl FromStr for Ties {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "allowed" => Ok(Ties::Allowed),
            "none" | "forbidden" => Ok(Ties::Forbidden),
            _ => Err(Error::invalid("ties", format!("{s:?} is not allowed|none"))),
        }
    }
}

impl fmt::Display for WmrQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.signs, self.ties)
    }
}

/// `Σ w_i x_i` at every profile, ascending.
fn weighted_sums(rule: &VotingRule, w: &[Rational]) -> Vec<Rational> {
    rule.profiles()
        .map(|x| {
            w.iter().enumerate().fold(Rational::zero(), |acc, (i, wi)| {
                if x.vote(i + 1) > 0 {
                    acc + wi
                } else {
                    acc - wi
                }
            })
        })
        .collect()
}

/// Whether `w` represents `rule` in the sense of `query`.
pub fn verify_wmr(rule: &VotingRule, w: &[Rational], query: WmrQuery) -> bool {
    if w.len() != rule.n() || w.iter().all(Zero::is_zero) {
        return false;
    }
    let signs_ok = match query.signs {
        SignClass::Free => true,
        SignClass::NonNegative => w.iter().all(|v| !v.is_negative()),
        SignClass::Positive => w.iter().all(Signed::is_positive),
    };
    signs_ok
        && rule
            .outcomes()
            .iter()
            .zip(weighted_sums(rule, w))
            .all(|(&phi, s)| {
                let signed = if phi > 0 { s } else { -s };
                match query.ties {
                    Ties::Allowed => !signed.is_negative(),
                    Ties::Forbidden => signed.is_positive(),
                }
            })
}

fn base_system(rule: &VotingRule, query: WmrQuery) -> Result<LinearSystem> {
    let n = rule.n();
    let sign = match query.signs {
        SignClass::Free => VarSign::Free,
        SignClass::NonNegative | SignClass::Positive => VarSign::NonNegative,
    };
    let rel = match query.ties {
        Ties::Allowed => Rel::Ge,
        Ties::Forbidden => Rel::Gt,
    };
    let mut sys = LinearSystem::new(vec![sign; n]);
    for x in rule.profiles() {
        let phi = rule.outcome(x);
        let coeffs = (1..=n)
            .map(|i| rational::int(i64::from(phi * x.vote(i))))
            .collect();
        sys.push(coeffs, rel, Rational::zero())?;
    }
    if query.signs == SignClass::Positive {
        for k in 0..n {
            let mut e = vec![Rational::zero(); n];
            e[k] = Rational::one();
            sys.push(e, Rel::Gt, Rational::zero())?;
        }
    }
    Ok(sys)
}

/// The systems whose joint infeasibility means "no representation": one
/// system, or for free weights with ties one per choice of a coordinate
/// forced to be at least 1 or at most −1 (which is how `w ≠ 0` is imposed).
pub fn wmr_systems(rule: &VotingRule, query: WmrQuery) -> Result<Vec<LinearSystem>> {
    let n = rule.n();
    let mut sys = base_system(rule, query)?;
    Ok(match (query.signs, query.ties) {
        // Strict rows force w ≠ 0; positive weights are nonzero by sign.
        (_, Ties::Forbidden) | (SignClass::Positive, Ties::Allowed) => vec![sys],
        (SignClass::NonNegative, Ties::Allowed) => {
            sys.push(vec![Rational::one(); n], Rel::Eq, Rational::one())?;
            vec![sys]
        }
        (SignClass::Free, Ties::Allowed) => {
            let mut out = Vec::with_capacity(2 * n);
            for k in 0..n {
                for s in [1, -1] {
                    let mut trial = sys.clone();
                    let mut e = vec![Rational::zero(); n];
                    e[k] = rational::int(s);
                    trial.push(e, Rel::Ge, Rational::one())?;
                    out.push(trial);
                }
            }
            out
        }
    })
}

/// A representation, or one infeasibility certificate per system of
/// [`wmr_systems`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WmrOutcome {
    pub query: WmrQuery,
    #[serde(default, with = "rational::serde_opt_rational_vec")]
    pub weights: Option<Vec<Rational>>,
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        with = "serde_certificates"
    )]
    pub certificates: Option<Vec<Vec<Rational>>>,
}

mod serde_certificates {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        v: &Option<Vec<Vec<Rational>>>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        v.as_ref()
            .map(|c| {
                c.iter()
                    .map(|y| rational::format_vec(y))
                    .collect::<Vec<_>>()
            })
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Option<Vec<Vec<Rational>>>, D::Error> {
        let raw = Option::<Vec<Vec<String>>>::deserialize(d)?;
        raw.map(|c| {
            c.iter()
                .map(|y| rational::parse_vec(y))
                .collect::<Result<Vec<_>>>()
        })
        .transpose()
        .map_err(serde::de::Error::custom)
    }
}

impl WmrOutcome {
    pub fn verify(&self, rule: &VotingRule) -> bool {
        match (&self.weights, &self.certificates) {
            (Some(w), None) => verify_wmr(rule, w, self.query),
            (None, Some(certs)) => {
                let Ok(systems) = wmr_systems(rule, self.query) else {
                    return false;
                };
                systems.len() == certs.len()
                    && systems
                        .iter()
                        .zip(certs)
                        .all(|(sys, y)| sys.is_infeasibility_certificate(y))
            }
            _ => false,
        }
    }
}

/// Solves every system of the query; weights are scaled to the smallest
/// integer vector.
pub fn find_wmr(rule: &VotingRule, query: WmrQuery) -> Result<WmrOutcome> {
    let mut certificates = Vec::new();
    let mut weights = None;
    for sys in wmr_systems(rule, query)? {
        match sys.solve()? {
            FeasibilityResult::Feasible { witness } => {
                weights = Some(rational::clear_denominators(&witness));
                break;
            }
            FeasibilityResult::Infeasible { certificate } => certificates.push(certificate),
        }
    }
    let out = WmrOutcome {
        query,
        certificates: weights.is_none().then_some(certificates),
        weights,
    };
    if !out.verify(rule) {
        return Err(Error::Internal(format!(
            "{query} representation failed verification"
        )));
    }
    Ok(out)
}

/// Finds a weight vector of the requested kind, scaled to the smallest
/// integer vector, or `None` when the rule has no such representation.
pub fn detect_wmr(rule: &VotingRule, query: WmrQuery) -> Result<Option<Vec<Rational>>> {
    Ok(find_wmr(rule, query)?.weights)
}

/// Every structural predicate of a rule with its certificates.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Classification {
    pub n: usize,
    pub table: String,
    pub anonymous: bool,
    pub dictator: Option<usize>,
    pub self_dual: bool,
    pub monotone: Monotonicity,
    pub robust: RobustnessCertificate,
    pub weakly_robust: RobustnessCertificate,
    pub wmr: Vec<WmrOutcome>,
}

impl Classification {
    pub fn weights_for(&self, query: WmrQuery) -> Option<&[Rational]> {
        self.wmr
            .iter()
            .find(|e| e.query == query)
            .and_then(|e| e.weights.as_deref())
    }
}

pub fn classify_rule(rule: &VotingRule) -> Result<Classification> {
    let robust = robustness::is_robust(rule)?;
    let weakly_robust = robustness::is_weakly_robust(rule)?;
    let wmr = WmrQuery::ALL
        .iter()
        .map(|&q| find_wmr(rule, q))
        .collect::<Result<Vec<_>>>()?;
    let c = Classification {
        n: rule.n(),
        table: rule.table_string(),
        anonymous: rule.is_anonymous(),
        dictator: rule.dictator_index(),
        self_dual: rule.is_self_dual(),
        monotone: rule.own_vote_monotonicity(),
        robust,
        weakly_robust,
        wmr,
    };
    let nonneg_ties = c
        .weights_for(WmrQuery::new(SignClass::NonNegative, Ties::Allowed))
        .is_some();
    let nonneg_strict = c
        .weights_for(WmrQuery::new(SignClass::NonNegative, Ties::Forbidden))
        .is_some();
    let consistent = (!c.robust.is_robust() || c.weakly_robust.is_robust())
        && c.robust.is_robust() == nonneg_strict
        && c.weakly_robust.is_robust() == nonneg_ties;
    if !consistent {
        return Err(Error::Internal(format!(
            "inconsistent classification for {}",
            c.table
        )));
    }
    Ok(c)
}
