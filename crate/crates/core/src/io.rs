//! JSON file formats for rules, distributions and distribution sets.
//!
//! ```text
//! rule:             {"n": 3, "table": "---+-+++"}
//! random rule:      {"n": 3, "table": ["-1/2", ...]}
//! distribution:     {"n": 3, "atoms": [{"profile": "+-+", "prob": "1/4"}, ...]}
//! distribution set: {"n": 3, "extreme_points": [<distribution>, ...]}
//! ```
//!
//! Tables are indexed by ascending profile index; in a profile string
//! individual 1 is the first character. Atoms that are left out have
//! probability zero. Every rational is a `"num/den"` string.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::distribution::{Distribution, DistributionSet};
use crate::error::{Error, Result};
use crate::profile::DecisionProfile;
use crate::rational;
use crate::rule::{AnyRule, RandomVotingRule, VotingRule};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRule {
    n: usize,
    table: RawTable,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawTable {
    Signs(String),
    Values(Vec<String>),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAtom {
    profile: String,
    prob: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDistribution {
    n: usize,
    atoms: Vec<RawAtom>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDistributionSet {
    n: usize,
    extreme_points: Vec<RawDistribution>,
}

fn in_field(field: &str, e: Error) -> Error {
    match e {
        Error::Invalid {
            field: inner,
            reason,
        } if field.ends_with(inner.as_str()) => Error::invalid(field, reason),
        Error::Invalid {
            field: inner,
            reason,
        } => Error::invalid(format!("{field}.{inner}"), reason),
        Error::Rational(s) => Error::invalid(field, format!("cannot parse rational {s:?}")),
        other => Error::invalid(field, other.to_string()),
    }
}

pub fn rule_to_json(rule: &VotingRule) -> Value {
    json!({"n": rule.n(), "table": rule.table_string()})
}

pub fn random_rule_to_json(rule: &RandomVotingRule) -> Value {
    json!({"n": rule.n(), "table": rational::format_vec(rule.outcomes())})
}

pub fn any_rule_to_json(rule: &AnyRule) -> Value {
    match rule {
        AnyRule::Deterministic(r) => rule_to_json(r),
        AnyRule::Random(r) => random_rule_to_json(r),
    }
}

/// Reads either kind of rule; a string table is deterministic, an array of
/// rationals is random.
pub fn any_rule_from_json(v: &Value) -> Result<AnyRule> {
    let raw: RawRule = serde_json::from_value(v.clone())?;
    match raw.table {
        RawTable::Signs(s) => VotingRule::parse_table(raw.n, &s)
            .map(AnyRule::Deterministic)
            .map_err(|e| in_field("table", e)),
        RawTable::Values(vals) => {
            let outcomes = vals
                .iter()
                .enumerate()
                .map(|(i, s)| rational::parse(s).map_err(|e| in_field(&format!("table[{i}]"), e)))
                .collect::<Result<Vec<_>>>()?;
            RandomVotingRule::new(raw.n, outcomes)
                .map(AnyRule::Random)
                .map_err(|e| in_field("table", e))
        }
    }
}

pub fn rule_from_json(v: &Value) -> Result<VotingRule> {
    match any_rule_from_json(v)? {
        AnyRule::Deterministic(r) => Ok(r),
        AnyRule::Random(_) => Err(Error::invalid("table", "expected a +/- string")),
    }
}

/// A deterministic table is accepted and embedded.
pub fn random_rule_from_json(v: &Value) -> Result<RandomVotingRule> {
    Ok(any_rule_from_json(v)?.to_random())
}

pub fn distribution_to_json(p: &Distribution) -> Value {
    let atoms: Vec<Value> = p
        .support()
        .map(|(x, q)| json!({"profile": x.to_string(), "prob": rational::format(q)}))
        .collect();
    json!({"n": p.n(), "atoms": atoms})
}

fn distribution_from_raw(raw: RawDistribution, path: &str) -> Result<Distribution> {
    let atoms = raw
        .atoms
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let x = DecisionProfile::parse(&a.profile)
                .map_err(|e| in_field(&format!("{path}atoms[{i}].profile"), e))?;
            let q = rational::parse(&a.prob)
                .map_err(|e| in_field(&format!("{path}atoms[{i}].prob"), e))?;
            Ok((x, q))
        })
        .collect::<Result<Vec<_>>>()?;
    Distribution::from_atoms(raw.n, &atoms).map_err(|e| match e {
        Error::Invalid { .. } | Error::Dimension(_) | Error::VoterCount(_) => {
            in_field(&format!("{path}atoms"), e)
        }
        other => other,
    })
}

pub fn distribution_from_json(v: &Value) -> Result<Distribution> {
    let raw: RawDistribution = serde_json::from_value(v.clone())?;
    distribution_from_raw(raw, "")
}

pub fn distribution_set_to_json(set: &DistributionSet) -> Value {
    let points: Vec<Value> = set
        .extreme_points()
        .iter()
        .map(distribution_to_json)
        .collect();
    json!({"n": set.n(), "extreme_points": points})
}

pub fn distribution_set_from_json(v: &Value) -> Result<DistributionSet> {
    let raw: RawDistributionSet = serde_json::from_value(v.clone())?;
    let n = raw.n;
    let points = raw
        .extreme_points
        .into_iter()
        .enumerate()
        .map(|(j, p)| {
            if p.n != n {
                return Err(Error::invalid(
                    format!("extreme_points[{j}].n"),
                    format!("{} differs from set n = {n}", p.n),
                ));
            }
            distribution_from_raw(p, &format!("extreme_points[{j}]."))
        })
        .collect::<Result<Vec<_>>>()?;
    DistributionSet::new(points).map_err(|e| in_field("extreme_points", e))
}

pub fn read_json(path: &Path) -> Result<Value> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Json(format!("{}: {e}", path.display())))
}

/// Hex SHA-256 of the compact JSON text (keys sorted).
pub fn digest(v: &Value) -> String {
    let text = serde_json::to_string(v).expect("JSON values always serialize");
    hex::encode(Sha256::digest(text.as_bytes()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn rule_round_trip() {
        let r = VotingRule::parse("---+-+++").unwrap();
        assert_eq!(rule_from_json(&rule_to_json(&r)).unwrap(), r);
        let rr = RandomVotingRule::randomized_majority(3, &ratio(1, 4)).unwrap();
        assert_eq!(
            random_rule_from_json(&random_rule_to_json(&rr)).unwrap(),
            rr
        );
    }

    #[test]
    fn distribution_round_trip() {
        let p = Distribution::uniform(3).unwrap();
        assert_eq!(
            distribution_from_json(&distribution_to_json(&p)).unwrap(),
            p
        );
        let set = DistributionSet::all_degenerate(2).unwrap();
        assert_eq!(
            distribution_set_from_json(&distribution_set_to_json(&set)).unwrap(),
            set
        );
    }

    #[test]
    fn errors_name_the_field() {
        let bad = json!({"n": 2, "atoms": [{"profile": "+-", "prob": "1/2"}, {"profile": "+x", "prob": "1/2"}]});
        let msg = distribution_from_json(&bad).unwrap_err().to_string();
        assert!(msg.contains("atoms[1].profile"), "{msg}");
        let bad = json!({"n": 2, "atoms": [{"profile": "+-", "prob": "one"}]});
        let msg = distribution_from_json(&bad).unwrap_err().to_string();
        assert!(msg.contains("atoms[0].prob"), "{msg}");
        let bad = json!({"n": 3, "table": "+-"});
        assert!(rule_from_json(&bad)
            .unwrap_err()
            .to_string()
            .contains("table"));
        let missing = json!({"table": "+-"});
        assert!(rule_from_json(&missing)
            .unwrap_err()
            .to_string()
            .contains("`n`"));
    }

    #[test]
    fn digest_ignores_key_order() {
        let a: Value = serde_json::from_str(r#"{"n":1,"table":"-+"}"#).unwrap();
        let b: Value = serde_json::from_str(r#"{"table":"-+","n":1}"#).unwrap();
        assert_eq!(digest(&a), digest(&b));
    }
}
