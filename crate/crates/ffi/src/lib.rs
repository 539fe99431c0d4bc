//! C interface to `robustvote`.
//!
//! Objects are opaque handles created by `rv_*_from_*` functions and released
//! with the matching `rv_*_free`. Every fallible call returns an [`RvStatus`];
//! on failure `rv_last_error_message` describes the problem. Strings handed
//! out by the library must be released with `rv_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use serde_json::Value;

use robustvote::robustness::{self, Mode};
use robustvote::{io, report, respond, wmr, Distribution, DistributionSet, Error, VotingRule};

/// Outcome of a call. Zero means success.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RvStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// Input text could not be parsed as JSON, a rule table or a rational.
    Parse = 3,
    /// Objects disagree in the number of individuals.
    DimensionMismatch = 4,
    /// Input parsed but violates a precondition.
    Invalid = 5,
    /// A consistency check failed inside the library. Always a bug.
    Internal = 6,
}

/// A deterministic voting rule.
pub struct RvRule(VotingRule);

/// A probability distribution over decision profiles.
pub struct RvDistribution(Distribution);

/// A set of distributions given by its extreme points.
pub struct RvDistributionSet(DistributionSet);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> RvStatus {
    match e {
        Error::Json(_) | Error::Rational(_) | Error::Invalid { .. } => RvStatus::Parse,
        Error::Dimension(_) => RvStatus::DimensionMismatch,
        Error::VoterCount(_) | Error::Precondition(_) | Error::Permutation(_) => RvStatus::Invalid,
        Error::Io(_) | Error::Internal(_) => RvStatus::Internal,
    }
}

struct Failure(RvStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure(RvStatus::Parse, format!("json: {e}"))
    }
}

fn null(what: &str) -> Failure {
    Failure(RvStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, recording any failure or panic.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> RvStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            RvStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("panic inside robustvote");
            RvStatus::Internal
        }
    }
}

unsafe fn text<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Failure(RvStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn json(s: *const c_char, what: &str) -> Result<Value, Failure> {
    Ok(serde_json::from_str(text(s, what)?)?)
}

unsafe fn get<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c =
        CString::new(s).map_err(|_| Failure(RvStatus::Internal, "string contains NUL".into()))?;
    put(out, c.into_raw(), "out")
}

unsafe fn put_json(out: *mut *mut c_char, v: &Value) -> Result<(), Failure> {
    put_string(out, serde_json::to_string(v)?)
}

unsafe fn free_box<T>(p: *mut T) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn rv_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread; empty after a success.
/// Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn rv_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn rv_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a truth table of `2^n` `+`/`-` characters, profiles in ascending
/// bit order with individual 1 as the lowest bit.
///
/// # Safety
/// `table` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rv_rule_from_table(
    table: *const c_char,
    out: *mut *mut RvRule,
) -> RvStatus {
    guard(|| {
        let rule = VotingRule::parse(text(table, "table")?)?;
        put(out, Box::into_raw(Box::new(RvRule(rule))), "out")
    })
}

/// Parses `{"n": .., "table": ".."}`.
///
/// # Safety
/// `json_text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rv_rule_from_json(
    json_text: *const c_char,
    out: *mut *mut RvRule,
) -> RvStatus {
    guard(|| {
        let rule = io::rule_from_json(&json(json_text, "json")?)?;
        put(out, Box::into_raw(Box::new(RvRule(rule))), "out")
    })
}

/// # Safety
/// `rule` must come from this library and not have been freed; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn rv_rule_free(rule: *mut RvRule) {
    free_box(rule)
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn rv_rule_num_voters(rule: *const RvRule, out: *mut usize) -> RvStatus {
    guard(|| put(out, get(rule, "rule")?.0.n(), "out"))
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn rv_rule_is_anonymous(rule: *const RvRule, out: *mut bool) -> RvStatus {
    guard(|| put(out, get(rule, "rule")?.0.is_anonymous(), "out"))
}

/// Writes the dictator's index (1-based), or 0 when there is none.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn rv_rule_dictator(rule: *const RvRule, out: *mut usize) -> RvStatus {
    guard(|| {
        put(
            out,
            get(rule, "rule")?.0.dictator_index().unwrap_or(0),
            "out",
        )
    })
}

/// Robustness against all degenerate distributions.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn rv_rule_is_robust(
    rule: *const RvRule,
    weak: bool,
    out: *mut bool,
) -> RvStatus {
    guard(|| {
        let r = &get(rule, "rule")?.0;
        let cert = if weak {
            robustness::is_weakly_robust(r)?
        } else {
            robustness::is_robust(r)?
        };
        put(out, cert.is_robust(), "out")
    })
}

/// Every structural predicate with certificates, as a JSON object.
///
/// # Safety
/// Pointers must be valid; release `*out` with `rv_string_free`.
#[no_mangle]
pub unsafe extern "C" fn rv_rule_classify_json(
    rule: *const RvRule,
    out: *mut *mut c_char,
) -> RvStatus {
    guard(|| {
        let c = wmr::classify_rule(&get(rule, "rule")?.0)?;
        put_json(out, &serde_json::to_value(c)?)
    })
}

/// Parses `{"n": .., "atoms": [{"profile": .., "prob": ..}, ..]}`.
///
/// # Safety
/// `json_text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rv_dist_from_json(
    json_text: *const c_char,
    out: *mut *mut RvDistribution,
) -> RvStatus {
    guard(|| {
        let p = io::distribution_from_json(&json(json_text, "json")?)?;
        put(out, Box::into_raw(Box::new(RvDistribution(p))), "out")
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rv_dist_uniform(n: usize, out: *mut *mut RvDistribution) -> RvStatus {
    guard(|| {
        let p = Distribution::uniform(n)?;
        put(out, Box::into_raw(Box::new(RvDistribution(p))), "out")
    })
}

/// # Safety
/// `dist` must come from this library and not have been freed; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn rv_dist_free(dist: *mut RvDistribution) {
    free_box(dist)
}

/// Parses `{"n": .., "extreme_points": [<distribution>, ..]}`.
///
/// # Safety
/// `json_text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rv_pset_from_json(
    json_text: *const c_char,
    out: *mut *mut RvDistributionSet,
) -> RvStatus {
    guard(|| {
        let set = io::distribution_set_from_json(&json(json_text, "json")?)?;
        put(out, Box::into_raw(Box::new(RvDistributionSet(set))), "out")
    })
}

/// The `2^n` degenerate distributions.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rv_pset_degenerate(
    n: usize,
    out: *mut *mut RvDistributionSet,
) -> RvStatus {
    guard(|| {
        let set = DistributionSet::all_degenerate(n)?;
        put(out, Box::into_raw(Box::new(RvDistributionSet(set))), "out")
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn rv_pset_len(pset: *const RvDistributionSet, out: *mut usize) -> RvStatus {
    guard(|| put(out, get(pset, "pset")?.0.len(), "out"))
}

/// # Safety
/// `pset` must come from this library and not have been freed; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn rv_pset_free(pset: *mut RvDistributionSet) {
    free_box(pset)
}

/// Decides robustness of `rule` against `pset` (all degenerate
/// distributions when null). Writes the verdict to `robust` and, when
/// `certificate` is not null, the certificate as JSON.
///
/// # Safety
/// Pointers must be valid; release `*certificate` with `rv_string_free`.
#[no_mangle]
pub unsafe extern "C" fn rv_certify(
    rule: *const RvRule,
    pset: *const RvDistributionSet,
    weak: bool,
    robust: *mut bool,
    certificate: *mut *mut c_char,
) -> RvStatus {
    guard(|| {
        let r = &get(rule, "rule")?.0;
        let mode = if weak { Mode::Weak } else { Mode::Strict };
        let cert = match pset.as_ref() {
            Some(s) => robustness::certify_p_robust(r, &s.0, mode)?,
            None => {
                robustness::certify_p_robust(r, &DistributionSet::all_degenerate(r.n())?, mode)?
            }
        };
        put(robust, cert.is_robust(), "robust")?;
        if !certificate.is_null() {
            put_json(certificate, &serde_json::to_value(&cert)?)?;
        }
        Ok(())
    })
}

/// Responsiveness of each individual as a JSON array of `"num/den"` strings.
///
/// # Safety
/// Pointers must be valid; release `*out` with `rv_string_free`.
#[no_mangle]
pub unsafe extern "C" fn rv_responsiveness_json(
    rule: *const RvRule,
    dist: *const RvDistribution,
    out: *mut *mut c_char,
) -> RvStatus {
    guard(|| {
        let r = respond::responsiveness(&get(rule, "rule")?.0, &get(dist, "dist")?.0)?;
        put_json(out, &Value::from(robustvote::rational::format_vec(&r)))
    })
}

/// Re-checks a report produced by the command line tool. `valid` is false
/// when any check fails; `failures`, when not null, receives a JSON array
/// describing them. Malformed reports are an error, not an invalid verdict.
///
/// # Safety
/// `report_json` must be a NUL-terminated string; release `*failures` with
/// `rv_string_free`.
#[no_mangle]
pub unsafe extern "C" fn rv_verify_report(
    report_json: *const c_char,
    valid: *mut bool,
    failures: *mut *mut c_char,
) -> RvStatus {
    guard(|| {
        let found = report::verify(&json(report_json, "report")?)?;
        put(valid, found.is_empty(), "valid")?;
        if !failures.is_null() {
            put_json(failures, &Value::from(found))?;
        }
        Ok(())
    })
}
