//! Exhaustive enumeration of deterministic rules at small n.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::distribution::Distribution;
use crate::efficiency;
use crate::error::{Error, Result};
use crate::robustness;
use crate::rule::VotingRule;

/// Largest n for which all `2^(2ⁿ)` rules are enumerated.
pub const MAX_ENUMERATION_VOTERS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Predicate {
    All,
    Anonymous,
    Dictatorship,
    Monotone,
    SelfDual,
    Robust,
    WeaklyRobust,
    /// Strictly efficient under the uniform distribution.
    StrictlyEfficient,
}

impl Predicate {
    pub const NAMES: [&'static str; 8] = [
        "all",
        "anonymous",
        "dictator",
        "monotone",
        "self-dual",
        "robust",
        "weakly-robust",
        "strictly-efficient",
    ];

    pub fn eval(self, rule: &VotingRule) -> Result<bool> {
        Ok(match self {
            Predicate::All => true,
            Predicate::Anonymous => rule.is_anonymous(),
            Predicate::Dictatorship => rule.dictator_index().is_some(),
            Predicate::Monotone => rule.is_own_vote_monotone(),
            Predicate::SelfDual => rule.is_self_dual(),
            Predicate::Robust => {
                // Robust rules are tie-free weighted majorities, hence
                // monotone and self-dual; skip the LP for everything else.
                rule.is_self_dual()
                    && rule.is_own_vote_monotone()
                    && robustness::is_robust(rule)?.is_robust()
            }
            Predicate::WeaklyRobust => robustness::is_weakly_robust(rule)?.is_robust(),
            Predicate::StrictlyEfficient => {
                let p = Distribution::uniform(rule.n())?;
                efficiency::is_strictly_efficient(rule, &p)?.efficient
            }
        })
    }

    pub fn needs_lp(self) -> bool {
        matches!(
            self,
            Predicate::Robust | Predicate::WeaklyRobust | Predicate::StrictlyEfficient
        )
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = match self {
            Predicate::All => 0,
            Predicate::Anonymous => 1,
            Predicate::Dictatorship => 2,
            Predicate::Monotone => 3,
            Predicate::SelfDual => 4,
            Predicate::Robust => 5,
            Predicate::WeaklyRobust => 6,
            Predicate::StrictlyEfficient => 7,
        };
        f.write_str(Self::NAMES[i])
    }
}

impl FromStr for Predicate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "all" => Predicate::All,
            "anonymous" => Predicate::Anonymous,
            "dictator" | "dictatorship" => Predicate::Dictatorship,
            "monotone" | "strategy-proof" => Predicate::Monotone,
            "self-dual" => Predicate::SelfDual,
            "robust" => Predicate::Robust,
            "weakly-robust" => Predicate::WeaklyRobust,
            "strictly-efficient" => Predicate::StrictlyEfficient,
            _ => {
                return Err(Error::invalid(
                    "predicate",
                    format!("{s:?} is not one of {}", Self::NAMES.join(", ")),
                ))
            }
        })
    }
}

/// A conjunction of predicates, parsed from a comma-separated list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Filter(Vec<Predicate>);

impl Filter {
    pub fn new(mut preds: Vec<Predicate>) -> Self {
        // LP-backed predicates go last so cheap ones short-circuit them.
        preds.sort_by_key(|p| p.needs_lp());
        Filter(preds)
    }

    pub fn all() -> Self {
        Filter(vec![])
    }

    pub fn predicates(&self) -> &[Predicate] {
        &self.0
    }

    pub fn eval(&self, rule: &VotingRule) -> Result<bool> {
        for p in &self.0 {
            if !p.eval(rule)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl From<Predicate> for Filter {
    fn from(p: Predicate) -> Self {
        Filter(vec![p])
    }
}

impl FromStr for Filter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let preds = s
            .split(',')
            .map(|t| t.trim().parse())
            .collect::<Result<Vec<Predicate>>>()?;
        Ok(Filter::new(preds))
    }
}

impl fmt::Display for Filter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("all");
        }
        let names: Vec<String> = self.0.iter().map(Predicate::to_string).collect();
        f.write_str(&names.join(","))
    }
}

fn check_n(n: usize) -> Result<u64> {
    if n == 0 || n > MAX_ENUMERATION_VOTERS {
        return Err(Error::Precondition(format!(
            "exhaustive enumeration needs 1 ≤ n ≤ {MAX_ENUMERATION_VOTERS}, got {n}"
        )));
    }
    Ok(1u64 << (1u64 << n))
}

/// Every rule over `n` individuals passing `filter`, in ascending
/// truth-table order. Work is spread over the current rayon pool.
pub fn enumerate_rules(n: usize, filter: &Filter) -> Result<Vec<VotingRule>> {
    let count = check_n(n)?;
    let hits = (0..count)
        .into_par_iter()
        .map(|code| {
            let rule = VotingRule::from_code(n, code)?;
            Ok(filter.eval(&rule)?.then_some(rule))
        })
        .collect::<Result<Vec<Option<VotingRule>>>>()?;
    Ok(hits.into_iter().flatten().collect())
}

/// As [`enumerate_rules`] on a dedicated pool of `jobs` workers.
pub fn enumerate_rules_with_jobs(
    n: usize,
    filter: &Filter,
    jobs: usize,
) -> Result<Vec<VotingRule>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Internal(format!("worker pool: {e}")))?;
    pool.install(|| enumerate_rules(n, filter))
}

/// Sequential iterator over every rule in ascending truth-table order.
pub fn all_rules(n: usize) -> Result<impl Iterator<Item = VotingRule>> {
    let count = check_n(n)?;
    Ok((0..count).map(move |code| VotingRule::from_code(n, code).expect("code below 2^(2^n)")))
}
