//! Deterministic and random voting rules as truth tables.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::profile::{check_voters, DecisionProfile, Permutation};
use crate::rational::{self, Rational};

/// Largest `n` for which a rule fits in a `u64` truth-table code.
pub const MAX_CODE_VOTERS: usize = 6;

/// A total map from the `2ⁿ` profiles to `{−1, +1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VotingRule {
    n: usize,
    outcomes: Vec<i8>,
}

impl VotingRule {
    pub fn new(n: usize, outcomes: Vec<i8>) -> Result<Self> {
        check_voters(n)?;
        if outcomes.len() != 1 << n {
            return Err(Error::Dimension(format!(
                "rule table has {} entries, expected 2^{n} = {}",
                outcomes.len(),
                1usize << n
            )));
        }
        if let Some(bad) = outcomes.iter().find(|&&o| o != 1 && o != -1) {
            return Err(Error::invalid("table", format!("outcome {bad} is not ±1")));
        }
        Ok(VotingRule { n, outcomes })
    }

    pub fn from_fn(n: usize, f: impl Fn(DecisionProfile) -> i8) -> Result<Self> {
        check_voters(n)?;
        let outcomes = DecisionProfile::all(n).map(f).collect();
        Self::new(n, outcomes)
    }

    /// Parses a `+`/`-` string of length `2ⁿ`, indexed by ascending profile.
    pub fn parse_table(n: usize, table: &str) -> Result<Self> {
        let outcomes = table
            .chars()
            .map(|c| match c {
                '+' => Ok(1),
                '-' => Ok(-1),
                _ => Err(Error::invalid("table", format!("character {c:?}"))),
            })
            .collect::<Result<Vec<i8>>>()?;
        Self::new(n, outcomes)
    }

    /// Parses a table string, inferring `n` from its length.
    pub fn parse(table: &str) -> Result<Self> {
        let len = table.chars().count();
        if !len.is_power_of_two() || len < 2 {
            return Err(Error::invalid(
                "table",
                format!("length {len} is not 2^n for n >= 1"),
            ));
        }
        Self::parse_table(len.trailing_zeros() as usize, table)
    }

    /// Rule with truth-table code `code`: bit `x` set iff `φ(x) = +1`.
    pub fn from_code(n: usize, code: u64) -> Result<Self> {
        if n == 0 || n > MAX_CODE_VOTERS {
            return Err(Error::VoterCount(n));
        }
        let size = 1usize << n;
        if size < 64 && code >> size != 0 {
            return Err(Error::invalid("code", format!("{code} exceeds 2^(2^{n})")));
        }
        Ok(VotingRule {
            n,
            outcomes: (0..size)
                .map(|x| if code >> x & 1 == 1 { 1 } else { -1 })
                .collect(),
        })
    }

    pub fn code(&self) -> Option<u64> {
        if self.n > MAX_CODE_VOTERS {
            return None;
        }
        Some(
            self.outcomes
                .iter()
                .enumerate()
                .filter(|(_, &o)| o > 0)
                .fold(0u64, |acc, (x, _)| acc | 1 << x),
        )
    }

    /// `sign(Σ wᵢxᵢ)`, with `tie` wherever the weighted sum vanishes.
    pub fn weighted_majority(weights: &[i64], tie: i8) -> Result<Self> {
        let n = weights.len();
        Self::from_fn(n, |x| {
            let s: i64 = (1..=n).map(|i| weights[i - 1] * x.vote(i) as i64).sum();
            match s.signum() {
                0 => tie,
                s => s as i8,
            }
        })
    }

    /// Simple majority; `tie` decides balanced profiles when `n` is even.
    pub fn simple_majority(n: usize, tie: i8) -> Result<Self> {
        Self::weighted_majority(&vec![1; n], tie)
    }

    /// `+1` exactly when at least `quota` individuals vote `+1`.
    pub fn quota(n: usize, quota: usize) -> Result<Self> {
        Self::from_fn(n, |x| if x.count_plus() >= quota { 1 } else { -1 })
    }

    pub fn unanimity(n: usize) -> Result<Self> {
        Self::quota(n, n)
    }

    pub fn dictator(n: usize, i: usize) -> Result<Self> {
        if i == 0 || i > n {
            return Err(Error::invalid("dictator", format!("{i} outside 1..={n}")));
        }
        Self::from_fn(n, |x| x.vote(i))
    }

    pub fn constant(n: usize, value: i8) -> Result<Self> {
        Self::from_fn(n, |_| value)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn outcomes(&self) -> &[i8] {
        &self.outcomes
    }

    pub fn outcome(&self, x: DecisionProfile) -> i8 {
        self.outcomes[x.index()]
    }

    pub fn table_string(&self) -> String {
        self.outcomes
            .iter()
            .map(|&o| if o > 0 { '+' } else { '-' })
            .collect()
    }

    pub fn profiles(&self) -> impl Iterator<Item = DecisionProfile> {
        DecisionProfile::all(self.n)
    }

    /// The rule that always disagrees with `self`.
    pub fn inverse(&self) -> VotingRule {
        VotingRule {
            n: self.n,
            outcomes: self.outcomes.iter().map(|o| -o).collect(),
        }
    }

    /// Anonymity via the popcount criterion: the outcome depends only on how
    /// many individuals vote `+1`.
    pub fn is_anonymous(&self) -> bool {
        let mut by_count = vec![0i8; self.n + 1];
        self.profiles().all(|x| {
            let slot = &mut by_count[x.count_plus()];
            let o = self.outcome(x);
            if *slot == 0 {
                *slot = o;
            }
            *slot == o
        })
    }

    /// The individual `i` with `φ(x) = xᵢ` for every `x`, if any.
    pub fn dictator_index(&self) -> Option<usize> {
        (1..=self.n).find(|&i| self.profiles().all(|x| self.outcome(x) == x.vote(i)))
    }

    /// `φ(−x) = −φ(x)` for every `x`.
    pub fn is_self_dual(&self) -> bool {
        self.profiles()
            .all(|x| self.outcome(x.negated()) == -self.outcome(x))
    }

    /// Checks that switching any single vote from `−1` to `+1` never moves the
    /// outcome from `+1` to `−1`.
    ///
    /// On failure the witness is the first `(i, x₋ᵢ)` found, scanning
    /// individuals in order and the others' votes by ascending index, with
    /// `φ(+1, x₋ᵢ) = −1` and `φ(−1, x₋ᵢ) = +1`.
    pub fn own_vote_monotonicity(&self) -> Monotonicity {
        for i in 1..=self.n {
            for x in self.profiles().filter(|x| x.vote(i) < 0) {
                let up = x.with_vote(i, 1);
                if self.outcome(up) < 0 && self.outcome(x) > 0 {
                    let others = (1..=self.n)
                        .filter(|&j| j != i)
                        .map(|j| if x.vote(j) > 0 { '+' } else { '-' })
                        .collect();
                    return Monotonicity {
                        monotone: false,
                        witness: Some(MonotonicityWitness {
                            individual: i,
                            others,
                        }),
                    };
                }
            }
        }
        Monotonicity {
            monotone: true,
            witness: None,
        }
    }

    pub fn is_own_vote_monotone(&self) -> bool {
        self.own_vote_monotonicity().monotone
    }

    /// `ψ(x) = φ(x^π)`.
    pub fn apply_permutation(&self, pi: &Permutation) -> Result<VotingRule> {
        if pi.n() != self.n {
            return Err(Error::Permutation(format!(
                "permutation on {} individuals applied to a rule on {}",
                pi.n(),
                self.n
            )));
        }
        Ok(VotingRule {
            n: self.n,
            outcomes: self
                .profiles()
                .map(|x| self.outcome(x.permuted(pi)))
                .collect(),
        })
    }

    /// Outcome by `+1`-count for an anonymous rule.
    pub fn outcome_by_count(&self) -> Option<Vec<i8>> {
        if !self.is_anonymous() {
            return None;
        }
        let mut by_count = vec![0i8; self.n + 1];
        for x in self.profiles() {
            by_count[x.count_plus()] = self.outcome(x);
        }
        Some(by_count)
    }

    pub fn to_random(&self) -> RandomVotingRule {
        RandomVotingRule {
            n: self.n,
            outcomes: self
                .outcomes
                .iter()
                .map(|&o| rational::int(o as i64))
                .collect(),
        }
    }
}

impl fmt::Display for VotingRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.table_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Monotonicity {
    pub monotone: bool,
    pub witness: Option<MonotonicityWitness>,
}

/// Individual `i` and the votes of everyone else (in individual order).
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct MonotonicityWitness {
    pub individual: usize,
    pub others: String,
}

/// A map from profiles to `[−1, 1]`: at `x` the decision is `+1` with
/// probability `(1 + φ̄(x))/2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RandomVotingRule {
    n: usize,
    outcomes: Vec<Rational>,
}

impl RandomVotingRule {
    pub fn new(n: usize, outcomes: Vec<Rational>) -> Result<Self> {
        check_voters(n)?;
        if outcomes.len() != 1 << n {
            return Err(Error::Dimension(format!(
                "random rule table has {} entries, expected {}",
                outcomes.len(),
                1usize << n
            )));
        }
        if let Some(bad) = outcomes.iter().find(|o| o.abs() > Rational::one()) {
            return Err(Error::invalid(
                "table",
                format!("outcome {} outside [-1, 1]", rational::format(bad)),
            ));
        }
        Ok(RandomVotingRule { n, outcomes })
    }

    pub fn from_fn(n: usize, f: impl Fn(DecisionProfile) -> Rational) -> Result<Self> {
        check_voters(n)?;
        Self::new(n, DecisionProfile::all(n).map(f).collect())
    }

    /// Majority decision taken with probability `1/2 + ε` (odd `n`): the
    /// outcome is `±2ε` with the sign of `Σ xᵢ`.
    pub fn randomized_majority(n: usize, epsilon: &Rational) -> Result<Self> {
        if n.is_multiple_of(2) {
            return Err(Error::Precondition(format!(
                "randomized majority needs odd n, got {n}"
            )));
        }
        let two_eps = epsilon * rational::int(2);
        Self::from_fn(n, |x| {
            if x.vote_sum() > 0 {
                two_eps.clone()
            } else {
                -two_eps.clone()
            }
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn outcomes(&self) -> &[Rational] {
        &self.outcomes
    }

    pub fn outcome(&self, x: DecisionProfile) -> &Rational {
        &self.outcomes[x.index()]
    }

    pub fn profiles(&self) -> impl Iterator<Item = DecisionProfile> {
        DecisionProfile::all(self.n)
    }

    pub fn inverse(&self) -> RandomVotingRule {
        RandomVotingRule {
            n: self.n,
            outcomes: self.outcomes.iter().map(|o| -o).collect(),
        }
    }

    pub fn is_anonymous(&self) -> bool {
        let mut by_count: Vec<Option<&Rational>> = vec![None; self.n + 1];
        self.profiles().all(|x| {
            let o = self.outcome(x);
            match by_count[x.count_plus()] {
                None => {
                    by_count[x.count_plus()] = Some(o);
                    true
                }
                Some(prev) => prev == o,
            }
        })
    }

    /// The deterministic rule this equals, if every entry is `±1`.
    pub fn as_deterministic(&self) -> Option<VotingRule> {
        let outcomes = self
            .outcomes
            .iter()
            .map(|o| {
                if o.is_one() {
                    Some(1)
                } else if (-o).is_one() {
                    Some(-1)
                } else {
                    None
                }
            })
            .collect::<Option<Vec<i8>>>()?;
        Some(VotingRule {
            n: self.n,
            outcomes,
        })
    }

    pub fn is_zero_anywhere(&self) -> bool {
        self.outcomes.iter().any(Zero::is_zero)
    }
}

impl From<&VotingRule> for RandomVotingRule {
    fn from(rule: &VotingRule) -> Self {
        rule.to_random()
    }
}

/// Either kind of rule, for operations defined on both.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnyRule {
    Deterministic(VotingRule),
    Random(RandomVotingRule),
}

impl AnyRule {
    pub fn n(&self) -> usize {
        match self {
            AnyRule::Deterministic(r) => r.n(),
            AnyRule::Random(r) => r.n(),
        }
    }

    pub fn to_random(&self) -> RandomVotingRule {
        match self {
            AnyRule::Deterministic(r) => r.to_random(),
            AnyRule::Random(r) => r.clone(),
        }
    }
}
