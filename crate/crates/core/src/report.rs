//! Self-describing JSON reports, one per analysis, and an LP-free checker
//! that re-derives every embedded certificate from the embedded inputs.
//!
//! ```text
//! {
//!   "schema": "robustvote/1",
//!   "command": "certify",
//!   "argv": ["certify", "--rule", "smr3.json"],
//!   "inputs": {"rule": {"sha256": "...", "value": {...}}, ...},
//!   "verdict": "robust",
//!   "affirmative": true,
//!   "result": {...},
//!   "timing": {"elapsed_us": 812}
//! }
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use num_traits::Signed;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::distribution::{Distribution, DistributionSet};
use crate::efficiency::{self, EfficiencyMode, EfficiencyResult};
use crate::enumerate::{self, Filter};
use crate::error::{Error, Result};
use crate::gamma;
use crate::io;
use crate::random_rules::{self, RandomRobustness};
use crate::rational::{self, ExtendedRational, Rational};
use crate::respond;
use crate::robustness::{self, MinMax, Mode, RobustnessCertificate};
use crate::rule::{AnyRule, VotingRule};
use crate::wmr::{self, Classification, SignClass, Ties, WmrOutcome, WmrQuery};

pub const SCHEMA: &str = "robustvote/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Input {
    pub sha256: String,
    pub value: Value,
}

impl Input {
    pub fn new(value: Value) -> Self {
        Input {
            sha256: io::digest(&value),
            value,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timing {
    pub elapsed_us: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub schema: String,
    pub command: String,
    #[serde(default)]
    pub argv: Vec<String>,
    pub inputs: BTreeMap<String, Input>,
    /// Absent for commands that compute values rather than decide.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<String>,
    pub affirmative: bool,
    pub result: Value,
    pub timing: Timing,
}

impl Report {
    /// 0 for an affirmative verdict (or a plain computation), 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.affirmative {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("reports always serialize")
    }

    pub fn input(&self, name: &str) -> Result<&Value> {
        self.inputs
            .get(name)
            .map(|i| &i.value)
            .ok_or_else(|| Error::invalid(format!("inputs.{name}"), "missing"))
    }
}

struct Draft {
    command: &'static str,
    inputs: BTreeMap<String, Input>,
    start: Instant,
}

impl Draft {
    fn new(command: &'static str) -> Self {
        Draft {
            command,
            inputs: BTreeMap::new(),
            start: Instant::now(),
        }
    }

    fn input(&mut self, name: &str, value: Value) -> Value {
        self.inputs
            .insert(name.to_string(), Input::new(value.clone()));
        value
    }

    fn finish(self, verdict: Option<&str>, affirmative: bool, result: Value) -> Report {
        Report {
            schema: SCHEMA.to_string(),
            command: self.command.to_string(),
            argv: Vec::new(),
            inputs: self.inputs,
            verdict: verdict.map(str::to_string),
            affirmative,
            result,
            timing: Timing {
                elapsed_us: u64::try_from(self.start.elapsed().as_micros()).unwrap_or(u64::MAX),
            },
        }
    }
}

/// Parses one named input, prefixing the offending field with the input's
/// name.
fn parse<T>(name: &str, v: &Value, f: impl Fn(&Value) -> Result<T>) -> Result<T> {
    f(v).map_err(|e| match e {
        Error::Invalid { field, reason } => Error::invalid(format!("{name}.{field}"), reason),
        other => Error::invalid(name, other.to_string()),
    })
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("results always serialize")
}

fn with_verified(mut v: Value) -> Value {
    if let Value::Object(m) = &mut v {
        m.insert("verified".into(), Value::Bool(true));
    }
    v
}

fn verdict_word(robust: bool) -> &'static str {
    if robust {
        "robust"
    } else {
        "not_robust"
    }
}

fn weights_value(w: &[Rational]) -> Value {
    json!(rational::format_vec(w))
}

fn weights_from_value(v: &Value) -> Result<Vec<Rational>> {
    let raw: Vec<String> = serde_json::from_value(v.clone())?;
    raw.iter()
        .enumerate()
        .map(|(i, s)| {
            rational::parse(s).map_err(|_| {
                Error::invalid(format!("[{i}]"), format!("cannot parse rational {s:?}"))
            })
        })
        .collect()
}

pub fn classify(rule: Value) -> Result<Report> {
    let mut d = Draft::new("classify");
    let rule = parse("rule", &d.input("rule", rule), io::rule_from_json)?;
    let c = wmr::classify_rule(&rule)?;
    let robust = c.robust.is_robust();
    Ok(d.finish(Some(verdict_word(robust)), robust, to_value(&c)))
}

/// `pset` defaults to the degenerate distributions; it is embedded either
/// way so the report checks on its own.
pub fn certify(rule: Value, pset: Option<Value>, mode: Mode) -> Result<Report> {
    let mut d = Draft::new("certify");
    let rule = parse("rule", &d.input("rule", rule), io::rule_from_json)?;
    let pset = match pset {
        Some(v) => v,
        None => io::distribution_set_to_json(&DistributionSet::all_degenerate(rule.n())?),
    };
    let pset = parse(
        "pset",
        &d.input("pset", pset),
        io::distribution_set_from_json,
    )?;
    let cert = robustness::certify_p_robust(&rule, &pset, mode)?;
    let robust = cert.is_robust();
    Ok(d.finish(
        Some(verdict_word(robust)),
        robust,
        with_verified(to_value(&cert)),
    ))
}

fn respond_result(rule: &AnyRule, p: &Distribution) -> Result<Value> {
    let (expectations, responsiveness) = match rule {
        AnyRule::Deterministic(r) => (respond::expectations(r, p)?, respond::responsiveness(r, p)?),
        AnyRule::Random(r) => (
            respond::expectations_random(r, p)?,
            respond::responsiveness_random(r, p)?,
        ),
    };
    let mut out = json!({
        "expectations": rational::format_vec(&expectations),
        "responsiveness": rational::format_vec(&responsiveness),
        "mean": rational::format(&respond::mean(&responsiveness)),
    });
    if let AnyRule::Deterministic(r) = rule {
        if r.is_anonymous() {
            out["agreement_counts"] = json!(respond::agreement_counts(r)?);
        }
    }
    Ok(out)
}

pub fn respond(rule: Value, dist: Value) -> Result<Report> {
    let mut d = Draft::new("respond");
    let rule = parse("rule", &d.input("rule", rule), io::any_rule_from_json)?;
    let p = parse("dist", &d.input("dist", dist), io::distribution_from_json)?;
    if rule.n() != p.n() {
        return Err(Error::Dimension("rule and distribution differ in n".into()));
    }
    let result = respond_result(&rule, &p)?;
    Ok(d.finish(None, true, result))
}

pub fn rtf(weights: &[Rational], dist: Value) -> Result<Report> {
    let mut d = Draft::new("rtf");
    d.input("weights", weights_value(weights));
    let p = parse("dist", &d.input("dist", dist), io::distribution_from_json)?;
    let m = respond::rtf_max_weighted(weights, &p)?;
    Ok(d.finish(None, true, to_value(&m)))
}

pub fn wmr(rule: Value, signs: SignClass, ties: Ties) -> Result<Report> {
    let mut d = Draft::new("wmr");
    let rule = parse("rule", &d.input("rule", rule), io::rule_from_json)?;
    let out = wmr::find_wmr(&rule, WmrQuery::new(signs, ties))?;
    let found = out.weights.is_some();
    let verdict = if found { "wmr" } else { "not_wmr" };
    Ok(d.finish(Some(verdict), found, with_verified(to_value(&out))))
}

pub fn efficiency(rule: Value, dist: Value, mode: EfficiencyMode) -> Result<Report> {
    let mut d = Draft::new("efficiency");
    let rule = parse("rule", &d.input("rule", rule), io::rule_from_json)?;
    let p = parse("dist", &d.input("dist", dist), io::distribution_from_json)?;
    let out = efficiency::efficiency(&rule, &p, mode)?;
    let verdict = if out.efficient {
        "efficient"
    } else {
        "not_efficient"
    };
    Ok(d.finish(Some(verdict), out.efficient, with_verified(to_value(&out))))
}

fn dominance_result(a: &AnyRule, b: &AnyRule, p: &Distribution) -> Result<(String, bool, Value)> {
    let v = efficiency::pareto_compare(a, b, p)?;
    let verdict = match v.direction {
        Some(side) => format!(
            "{}_{}",
            to_value(&side).as_str().unwrap_or("?"),
            to_value(&v.relation).as_str().unwrap_or("?")
        ),
        None => to_value(&v.relation).as_str().unwrap_or("?").to_string(),
    };
    let affirmative = v.direction == Some(efficiency::Side::A);
    let mut out = to_value(&v);
    out["a_weakly_preferred"] = json!(v.a_weakly_preferred());
    out["b_weakly_preferred"] = json!(v.b_weakly_preferred());
    Ok((verdict, affirmative, out))
}

/// Affirmative when `a` is Pareto-preferred (strictly or not) to `b`.
pub fn dominance(a: Value, b: Value, dist: Value) -> Result<Report> {
    let mut d = Draft::new("dominance");
    let a = parse("a", &d.input("a", a), io::any_rule_from_json)?;
    let b = parse("b", &d.input("b", b), io::any_rule_from_json)?;
    let p = parse("dist", &d.input("dist", dist), io::distribution_from_json)?;
    let (verdict, affirmative, out) = dominance_result(&a, &b, &p)?;
    Ok(d.finish(Some(&verdict), affirmative, out))
}

pub fn random_certify(rule: Value) -> Result<Report> {
    let mut d = Draft::new("random-certify");
    let rule = parse("rule", &d.input("rule", rule), io::random_rule_from_json)?;
    let out = random_rules::is_robust_random(&rule)?;
    Ok(d.finish(
        Some(verdict_word(out.robust)),
        out.robust,
        with_verified(to_value(&out)),
    ))
}

/// Affirmative when some deterministic rule is strictly Pareto-preferred to
/// the random rule under some distribution. A negative answer rests on the
/// exhaustive search and carries no certificate.
pub fn random_dominate(rule: Value) -> Result<Report> {
    let mut d = Draft::new("random-dominate");
    let rule = parse("rule", &d.input("rule", rule), io::random_rule_from_json)?;
    let Some(hit) = random_rules::find_dominating_deterministic(&rule)? else {
        return Ok(d.finish(Some("undominated"), false, json!({"found": false})));
    };
    let r_det = respond::responsiveness(&hit.rule, &hit.distribution)?;
    let r_rand = respond::responsiveness_random(&rule, &hit.distribution)?;
    let gaps: Vec<Rational> = r_det.iter().zip(&r_rand).map(|(a, b)| a - b).collect();
    let out = json!({
        "found": true,
        "rule": hit.rule.table_string(),
        "distribution": io::distribution_to_json(&hit.distribution),
        "gaps": rational::format_vec(&gaps),
    });
    Ok(d.finish(Some("dominated"), true, out))
}

pub fn enumerate(
    n: usize,
    filter: &Filter,
    count_only: bool,
    jobs: Option<usize>,
) -> Result<Report> {
    let mut d = Draft::new("enumerate");
    d.input("n", json!(n));
    d.input("predicate", json!(filter.to_string()));
    let rules = match jobs {
        Some(j) => enumerate::enumerate_rules_with_jobs(n, filter, j)?,
        None => enumerate::enumerate_rules(n, filter)?,
    };
    let out = if count_only {
        json!({"count": rules.len()})
    } else {
        let tables: Vec<String> = rules.iter().map(VotingRule::table_string).collect();
        json!({"count": rules.len(), "rules": tables})
    };
    Ok(d.finish(None, true, out))
}

/// Both thresholds; the lower one only up to the enumeration limit.
pub fn epsilon(n: usize) -> Result<Report> {
    let mut d = Draft::new("epsilon");
    d.input("n", json!(n));
    let upper = gamma::epsilon_upper(n)?;
    let mut out = json!({"upper": rational::format(&upper)});
    if n <= enumerate::MAX_ENUMERATION_VOTERS {
        let lower = gamma::epsilon_lower(n)?;
        let rule = VotingRule::parse_table(n, &lower.attained_by)?;
        let degenerates = DistributionSet::all_degenerate(n)?;
        let min_max = robustness::min_max_responsiveness(&rule, &degenerates)?;
        let cert = robustness::is_robust(&rule)?;
        out["lower"] = json!(lower.value.to_string());
        out["attained_by"] = json!(lower.attained_by);
        out["min_max"] = to_value(&min_max);
        out["robustness"] = to_value(&cert);
    } else {
        out["lower"] = Value::Null;
    }
    Ok(d.finish(None, true, out))
}

/// Affirmative when the witness exists, i.e. the rule is not a
/// dictatorship.
pub fn gamma_witness(rule: Value) -> Result<Report> {
    let mut d = Draft::new("gamma-witness");
    let rule = parse("rule", &d.input("rule", rule), io::rule_from_json)?;
    let (verdict, affirmative, out) = gamma_result(&rule)?;
    Ok(d.finish(Some(verdict), affirmative, out))
}

fn gamma_result(rule: &VotingRule) -> Result<(&'static str, bool, Value)> {
    Ok(match rule.dictator_index() {
        Some(i) => ("dictatorship", false, json!({"dictator": i})),
        None => (
            "counterexample",
            true,
            to_value(&gamma::gamma_counterexample(rule)?),
        ),
    })
}

/// The report of checking another report.
pub fn verify_report(report: Value) -> Result<Report> {
    let mut d = Draft::new("verify");
    let report = d.input("report", report);
    let checked = serde_json::from_value::<Report>(report.clone())
        .map(|r| r.command)
        .unwrap_or_default();
    let failures = verify(&report)?;
    let valid = failures.is_empty();
    let out = json!({"valid": valid, "command": checked, "failures": failures});
    Ok(d.finish(Some(if valid { "valid" } else { "invalid" }), valid, out))
}

/// Re-checks a report without solving any LP. Returns the list of failed
/// checks, empty when everything re-derives; malformed envelopes are
/// errors.
pub fn verify(report: &Value) -> Result<Vec<String>> {
    let r: Report = serde_json::from_value(report.clone())
        .map_err(|e| Error::invalid("report", format!("schema mismatch: {e}")))?;
    if r.schema != SCHEMA {
        return Err(Error::invalid(
            "schema",
            format!("expected {SCHEMA:?}, got {:?}", r.schema),
        ));
    }
    let mut c = Checks::default();
    for (name, input) in &r.inputs {
        c.check(
            io::digest(&input.value) == input.sha256,
            format!("inputs.{name}.sha256 does not match its value"),
        );
    }
    let outcome = match r.command.as_str() {
        "classify" => check_classify(&r, &mut c),
        "certify" => check_certify(&r, &mut c),
        "respond" => check_respond(&r, &mut c),
        "rtf" => check_rtf(&r, &mut c),
        "wmr" => check_wmr(&r, &mut c),
        "efficiency" => check_efficiency(&r, &mut c),
        "dominance" => check_dominance(&r, &mut c),
        "random-certify" => check_random_certify(&r, &mut c),
        "random-dominate" => check_random_dominate(&r, &mut c),
        "enumerate" => check_enumerate(&r, &mut c),
        "epsilon" => check_epsilon(&r, &mut c),
        "gamma-witness" => check_gamma(&r, &mut c),
        "verify" => check_verify(&r, &mut c),
        other => {
            return Err(Error::invalid(
                "command",
                format!("unknown command {other:?}"),
            ))
        }
    };
    if let Err(e) = outcome {
        c.fail(e.to_string());
    }
    Ok(c.failures)
}

#[derive(Default)]
struct Checks {
    failures: Vec<String>,
}

impl Checks {
    fn check(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn fail(&mut self, what: impl Into<String>) {
        self.failures.push(what.into());
    }
}

fn result_as<T: serde::de::DeserializeOwned>(r: &Report) -> Result<T> {
    serde_json::from_value(r.result.clone()).map_err(|e| Error::invalid("result", e.to_string()))
}

fn check_verdict(r: &Report, c: &mut Checks, affirmative: bool, verdict: &str) {
    c.check(
        r.affirmative == affirmative,
        "affirmative flag contradicts the certificate",
    );
    c.check(
        r.verdict.as_deref() == Some(verdict),
        format!("verdict should be {verdict:?}"),
    );
}

fn rule_input(r: &Report, name: &str) -> Result<VotingRule> {
    parse(name, r.input(name)?, io::rule_from_json)
}

fn dist_input(r: &Report) -> Result<Distribution> {
    parse("dist", r.input("dist")?, io::distribution_from_json)
}

fn n_input(r: &Report) -> Result<usize> {
    r.input("n")?
        .as_u64()
        .and_then(|n| usize::try_from(n).ok())
        .ok_or_else(|| Error::invalid("inputs.n", "not a non-negative integer"))
}

fn check_certify(r: &Report, c: &mut Checks) -> Result<()> {
    let rule = rule_input(r, "rule")?;
    let pset = parse("pset", r.input("pset")?, io::distribution_set_from_json)?;
    let cert: RobustnessCertificate = result_as(r)?;
    c.check(
        cert.verify(&rule, &pset),
        "robustness certificate does not re-derive",
    );
    check_verdict(r, c, cert.is_robust(), verdict_word(cert.is_robust()));
    Ok(())
}

fn check_classify(r: &Report, c: &mut Checks) -> Result<()> {
    let rule = rule_input(r, "rule")?;
    let k: Classification = result_as(r)?;
    let degenerates = DistributionSet::all_degenerate(rule.n())?;
    c.check(
        k.n == rule.n() && k.table == rule.table_string(),
        "classified table differs from the input",
    );
    c.check(
        k.anonymous == rule.is_anonymous(),
        "anonymity flag is wrong",
    );
    c.check(k.dictator == rule.dictator_index(), "dictator is wrong");
    c.check(
        k.self_dual == rule.is_self_dual(),
        "self-duality flag is wrong",
    );
    c.check(
        k.monotone == rule.own_vote_monotonicity(),
        "monotonicity is wrong",
    );
    c.check(
        k.robust.mode == Mode::Strict && k.robust.verify(&rule, &degenerates),
        "robust certificate does not re-derive",
    );
    c.check(
        k.weakly_robust.mode == Mode::Weak && k.weakly_robust.verify(&rule, &degenerates),
        "weakly robust certificate does not re-derive",
    );
    let queries: BTreeSet<String> = k.wmr.iter().map(|o| o.query.to_string()).collect();
    c.check(
        k.wmr.len() == WmrQuery::ALL.len() && queries.len() == WmrQuery::ALL.len(),
        "every weighted-majority query must appear exactly once",
    );
    for o in &k.wmr {
        c.check(
            o.verify(&rule),
            format!("{} representation does not re-derive", o.query),
        );
    }
    let has = |s, t| k.weights_for(WmrQuery::new(s, t)).is_some();
    c.check(
        k.robust.is_robust() == has(SignClass::NonNegative, Ties::Forbidden)
            && k.weakly_robust.is_robust() == has(SignClass::NonNegative, Ties::Allowed),
        "robustness verdicts disagree with the weighted-majority verdicts",
    );
    check_verdict(
        r,
        c,
        k.robust.is_robust(),
        verdict_word(k.robust.is_robust()),
    );
    Ok(())
}

fn check_respond(r: &Report, c: &mut Checks) -> Result<()> {
    let rule = parse("rule", r.input("rule")?, io::any_rule_from_json)?;
    let p = dist_input(r)?;
    c.check(
        respond_result(&rule, &p)? == r.result,
        "responsiveness does not recompute",
    );
    c.check(
        r.affirmative && r.verdict.is_none(),
        "respond carries no verdict",
    );
    Ok(())
}

fn check_rtf(r: &Report, c: &mut Checks) -> Result<()> {
    let w = parse("weights", r.input("weights")?, weights_from_value)?;
    let p = dist_input(r)?;
    c.check(
        to_value(&respond::rtf_max_weighted(&w, &p)?) == r.result,
        "maximum does not recompute",
    );
    c.check(
        r.affirmative && r.verdict.is_none(),
        "rtf carries no verdict",
    );
    Ok(())
}

fn check_wmr(r: &Report, c: &mut Checks) -> Result<()> {
    let rule = rule_input(r, "rule")?;
    let o: WmrOutcome = result_as(r)?;
    c.check(
        o.verify(&rule),
        "representation certificate does not re-derive",
    );
    let found = o.weights.is_some();
    check_verdict(r, c, found, if found { "wmr" } else { "not_wmr" });
    Ok(())
}

fn check_efficiency(r: &Report, c: &mut Checks) -> Result<()> {
    let rule = rule_input(r, "rule")?;
    let p = dist_input(r)?;
    let e: EfficiencyResult = result_as(r)?;
    c.check(
        e.verify(&rule, &p),
        "efficiency certificate does not re-derive",
    );
    check_verdict(
        r,
        c,
        e.efficient,
        if e.efficient {
            "efficient"
        } else {
            "not_efficient"
        },
    );
    Ok(())
}

fn check_dominance(r: &Report, c: &mut Checks) -> Result<()> {
    let a = parse("a", r.input("a")?, io::any_rule_from_json)?;
    let b = parse("b", r.input("b")?, io::any_rule_from_json)?;
    let p = dist_input(r)?;
    let (verdict, affirmative, out) = dominance_result(&a, &b, &p)?;
    c.check(out == r.result, "responsiveness gaps do not recompute");
    check_verdict(r, c, affirmative, &verdict);
    Ok(())
}

fn check_random_certify(r: &Report, c: &mut Checks) -> Result<()> {
    let rule = parse("rule", r.input("rule")?, io::random_rule_from_json)?;
    let o: RandomRobustness = result_as(r)?;
    c.check(
        o.verify(&rule),
        "random robustness certificate does not re-derive",
    );
    check_verdict(r, c, o.robust, verdict_word(o.robust));
    Ok(())
}

fn check_random_dominate(r: &Report, c: &mut Checks) -> Result<()> {
    let rule = parse("rule", r.input("rule")?, io::random_rule_from_json)?;
    let found = r
        .result
        .get("found")
        .and_then(Value::as_bool)
        .unwrap_or(false);
    check_verdict(r, c, found, if found { "dominated" } else { "undominated" });
    if !found {
        return Ok(());
    }
    let rival = parse("result.rule", &r.result["rule"], |v| {
        let table = v
            .as_str()
            .ok_or_else(|| Error::invalid("rule", "not a string"))?;
        VotingRule::parse_table(rule.n(), table)
    })?;
    let p = parse(
        "result.distribution",
        &r.result["distribution"],
        io::distribution_from_json,
    )?;
    let r_det = respond::responsiveness(&rival, &p)?;
    let r_rand = respond::responsiveness_random(&rule, &p)?;
    let gaps: Vec<Rational> = r_det.iter().zip(&r_rand).map(|(a, b)| a - b).collect();
    c.check(
        gaps.iter().all(Signed::is_positive),
        "rival is not strictly preferred",
    );
    c.check(
        r.result["gaps"] == weights_value(&gaps),
        "gaps do not recompute",
    );
    Ok(())
}

/// Structural checks only: membership in LP-backed classes is not re-decided
/// and completeness of the list is not re-established.
fn check_enumerate(r: &Report, c: &mut Checks) -> Result<()> {
    let n = n_input(r)?;
    let filter: Filter = r
        .input("predicate")?
        .as_str()
        .ok_or_else(|| Error::invalid("inputs.predicate", "not a string"))?
        .parse()?;
    let count = r.result.get("count").and_then(Value::as_u64);
    c.check(count.is_some(), "count missing");
    let Some(tables) = r.result.get("rules") else {
        return Ok(());
    };
    let tables: Vec<String> = serde_json::from_value(tables.clone())
        .map_err(|e| Error::invalid("result.rules", e.to_string()))?;
    c.check(
        count == Some(tables.len() as u64),
        "count differs from the list",
    );
    let mut last = None;
    for t in &tables {
        let rule = VotingRule::parse_table(n, t)?;
        let code = rule.code();
        c.check(
            last.is_none_or(|l| code > Some(l)),
            format!("{t} out of ascending order"),
        );
        last = code;
        for p in filter.predicates().iter().filter(|p| !p.needs_lp()) {
            c.check(p.eval(&rule)?, format!("{t} fails {p}"));
        }
    }
    Ok(())
}

/// The upper threshold is recomputed; the lower one is checked for the
/// reported rule (robust, min-max value bracketed from both sides, `g`
/// applied). Minimality over all robust rules is not re-established.
fn check_epsilon(r: &Report, c: &mut Checks) -> Result<()> {
    let n = n_input(r)?;
    c.check(
        r.result["upper"] == json!(rational::format(&gamma::epsilon_upper(n)?)),
        "upper threshold does not recompute",
    );
    if r.result["lower"].is_null() {
        c.check(
            n > enumerate::MAX_ENUMERATION_VOTERS,
            "lower threshold missing",
        );
        return Ok(());
    }
    let rule = parse("result.attained_by", &r.result["attained_by"], |v| {
        let table = v
            .as_str()
            .ok_or_else(|| Error::invalid("attained_by", "not a string"))?;
        VotingRule::parse_table(n, table)
    })?;
    let degenerates = DistributionSet::all_degenerate(n)?;
    let cert: RobustnessCertificate = serde_json::from_value(r.result["robustness"].clone())
        .map_err(|e| Error::invalid("result.robustness", e.to_string()))?;
    c.check(
        cert.mode == Mode::Strict && cert.is_robust() && cert.verify(&rule, &degenerates),
        "attaining rule is not certified robust",
    );
    let mm: MinMax = serde_json::from_value(r.result["min_max"].clone())
        .map_err(|e| Error::invalid("result.min_max", e.to_string()))?;
    let cols = robustness::responsiveness_columns(&rule, &degenerates)?;
    c.check(mm.verify(&cols), "min-max bounds do not re-derive");
    let lower: ExtendedRational = serde_json::from_value(r.result["lower"].clone())
        .map_err(|e| Error::invalid("result.lower", e.to_string()))?;
    c.check(
        gamma::g(&mm.value)? == lower,
        "lower threshold is not g(min-max)",
    );
    Ok(())
}

fn check_gamma(r: &Report, c: &mut Checks) -> Result<()> {
    let rule = rule_input(r, "rule")?;
    let (verdict, affirmative, out) = gamma_result(&rule)?;
    c.check(out == r.result, "witness does not recompute");
    check_verdict(r, c, affirmative, verdict);
    Ok(())
}

fn check_verify(r: &Report, c: &mut Checks) -> Result<()> {
    let inner = verify(r.input("report")?)?;
    let valid = inner.is_empty();
    c.check(
        r.result["valid"] == json!(valid),
        "validity does not recompute",
    );
    check_verdict(r, c, valid, if valid { "valid" } else { "invalid" });
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn smr3() -> Value {
        json!({"n": 3, "table": "---+-+++"})
    }

    #[test]
    fn certify_round_trip() {
        let rep = certify(smr3(), None, Mode::Strict).unwrap();
        assert!(rep.affirmative);
        assert_eq!(rep.result["verified"], json!(true));
        assert!(verify(&rep.to_json()).unwrap().is_empty());

        let mut bad = rep.to_json();
        bad["result"]["weights"][0] = json!("1/2");
        assert!(!verify(&bad).unwrap().is_empty());
    }

    #[test]
    fn tampered_input_is_caught() {
        let mut rep = certify(smr3(), None, Mode::Strict).unwrap().to_json();
        rep["inputs"]["rule"]["value"]["table"] = json!("-------+");
        assert!(!verify(&rep).unwrap().is_empty());
    }

    #[test]
    fn schema_mismatch_is_an_error() {
        let mut rep = certify(smr3(), None, Mode::Strict).unwrap().to_json();
        rep["schema"] = json!("robustvote/0");
        assert!(verify(&rep).is_err());
        assert!(verify(&json!({"schema": SCHEMA})).is_err());
    }

    #[test]
    fn epsilon_three() {
        let rep = epsilon(3).unwrap();
        assert_eq!(rep.result["lower"], json!("1/1"));
        assert_eq!(rep.result["upper"], json!("6/1"));
        assert!(verify(&rep.to_json()).unwrap().is_empty());
    }

    #[test]
    fn every_command_round_trips() {
        let uniform = io::distribution_to_json(&Distribution::uniform(3).unwrap());
        let random =
            json!({"n": 3, "table": ["-1/1", "-1/2", "-1/2", "1/2", "-1/2", "1/2", "1/2", "1/1"]});
        let reports = vec![
            classify(smr3()).unwrap(),
            classify(json!({"n": 3, "table": "-++-+--+"})).unwrap(),
            certify(json!({"n": 3, "table": "-------+"}), None, Mode::Weak).unwrap(),
            respond(smr3(), uniform.clone()).unwrap(),
            rtf(
                &[rational::int(1), rational::int(2), rational::int(1)],
                uniform.clone(),
            )
            .unwrap(),
            wmr(
                json!({"n": 3, "table": "-++-+--+"}),
                SignClass::Free,
                Ties::Allowed,
            )
            .unwrap(),
            efficiency(
                json!({"n": 3, "table": "-------+"}),
                uniform.clone(),
                EfficiencyMode::Strict,
            )
            .unwrap(),
            efficiency(smr3(), uniform.clone(), EfficiencyMode::Weak).unwrap(),
            dominance(smr3(), json!({"n": 3, "table": "-------+"}), uniform).unwrap(),
            random_certify(random.clone()).unwrap(),
            random_dominate(random).unwrap(),
            random_dominate(smr3()).unwrap(),
            enumerate(3, &"monotone".parse().unwrap(), false, Some(2)).unwrap(),
            gamma_witness(smr3()).unwrap(),
            gamma_witness(json!({"n": 2, "table": "-+-+"})).unwrap(),
        ];
        for rep in reports {
            let v = rep.to_json();
            assert_eq!(verify(&v).unwrap(), Vec::<String>::new(), "{}", rep.command);
            let outer = verify_report(v).unwrap();
            assert!(outer.affirmative);
            assert!(verify(&outer.to_json()).unwrap().is_empty());
        }
    }
}
