//! Decision profiles and permutations of individuals.
//!
//! A profile over `n` individuals is stored as an index in `[0, 2ⁿ)`: bit
//! `i − 1` is set exactly when individual `i` votes `+1`. In the textual form
//! individual 1 is the first character, so index 1 at `n = 3` reads `+--`.

use std::fmt;

use crate::error::{Error, Result};
use crate::MAX_VOTERS;

pub(crate) fn check_voters(n: usize) -> Result<()> {
    if n == 0 || n > MAX_VOTERS {
        return Err(Error::VoterCount(n));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DecisionProfile {
    n: usize,
    index: usize,
}

impl DecisionProfile {
    pub fn new(n: usize, index: usize) -> Result<Self> {
        check_voters(n)?;
        if index >= 1 << n {
            return Err(Error::invalid(
                "profile",
                format!("index {index} not below 2^{n}"),
            ));
        }
        Ok(DecisionProfile { n, index })
    }

    pub(crate) fn new_unchecked(n: usize, index: usize) -> Self {
        DecisionProfile { n, index }
    }

    /// Every profile over `n` individuals in ascending index order.
    pub fn all(n: usize) -> impl Iterator<Item = DecisionProfile> {
        (0..1usize << n).map(move |index| DecisionProfile { n, index })
    }

    pub fn from_votes(votes: &[i8]) -> Result<Self> {
        check_voters(votes.len())?;
        let mut index = 0;
        for (k, &v) in votes.iter().enumerate() {
            match v {
                1 => index |= 1 << k,
                -1 => {}
                _ => return Err(Error::invalid("profile", format!("vote {v} is not ±1"))),
            }
        }
        Ok(DecisionProfile {
            n: votes.len(),
            index,
        })
    }

    pub fn parse(s: &str) -> Result<Self> {
        let votes = s
            .chars()
            .map(|c| match c {
                '+' => Ok(1),
                '-' => Ok(-1),
                _ => Err(Error::invalid(
                    "profile",
                    format!("character {c:?} in {s:?}"),
                )),
            })
            .collect::<Result<Vec<i8>>>()?;
        Self::from_votes(&votes)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn index(&self) -> usize {
        self.index
    }

    /// Vote of individual `i` (1-based).
    pub fn vote(&self, i: usize) -> i8 {
        debug_assert!(i >= 1 && i <= self.n);
        if self.index >> (i - 1) & 1 == 1 {
            1
        } else {
            -1
        }
    }

    pub fn votes(&self) -> Vec<i8> {
        (1..=self.n).map(|i| self.vote(i)).collect()
    }

    /// Number of individuals voting `+1`.
    pub fn count_plus(&self) -> usize {
        self.index.count_ones() as usize
    }

    /// Σ xᵢ.
    pub fn vote_sum(&self) -> i64 {
        2 * self.count_plus() as i64 - self.n as i64
    }

    /// The profile with every vote reversed.
    pub fn negated(&self) -> Self {
        DecisionProfile {
            n: self.n,
            index: !self.index & ((1 << self.n) - 1),
        }
    }

    /// The same profile with individual `i`'s vote set to `vote`.
    pub fn with_vote(&self, i: usize, vote: i8) -> Self {
        let bit = 1 << (i - 1);
        let index = if vote > 0 {
            self.index | bit
        } else {
            self.index & !bit
        };
        DecisionProfile { n: self.n, index }
    }

    /// `x^π` with `(x^π)_i = x_{π(i)}`.
    pub fn permuted(&self, pi: &Permutation) -> Self {
        let mut index = 0;
        for i in 1..=self.n {
            if self.vote(pi.image(i)) > 0 {
                index |= 1 << (i - 1);
            }
        }
        DecisionProfile { n: self.n, index }
    }
}

impl fmt::Display for DecisionProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 1..=self.n {
            f.write_str(if self.vote(i) > 0 { "+" } else { "-" })?;
        }
        Ok(())
    }
}

/// A bijection on `{1, …, n}` given by its images.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        if n == 0 {
            return Err(Error::Permutation("empty".into()));
        }
        let mut seen = vec![false; n];
        for &j in &images {
            if j == 0 || j > n {
                return Err(Error::Permutation(format!("image {j} outside 1..={n}")));
            }
            if std::mem::replace(&mut seen[j - 1], true) {
                return Err(Error::Permutation(format!("image {j} repeated")));
            }
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (1..=n).collect(),
        }
    }

    /// Exchanges `a` and `b`.
    pub fn transposition(n: usize, a: usize, b: usize) -> Result<Self> {
        let mut images: Vec<usize> = (1..=n).collect();
        if a == 0 || b == 0 || a > n || b > n {
            return Err(Error::Permutation(format!("swap({a},{b}) with n = {n}")));
        }
        images.swap(a - 1, b - 1);
        Ok(Permutation { images })
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: (1..=self.n()).map(|i| self.image(other.image(i))).collect(),
        }
    }

    /// All `n!` permutations in lexicographic order of their image vectors.
    pub fn all(n: usize) -> Vec<Permutation> {
        fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Permutation>) {
            let n = used.len();
            if prefix.len() == n {
                out.push(Permutation {
                    images: prefix.clone(),
                });
                return;
            }
            for j in 1..=n {
                if !used[j - 1] {
                    used[j - 1] = true;
                    prefix.push(j);
                    rec(prefix, used, out);
                    prefix.pop();
                    used[j - 1] = false;
                }
            }
        }
        let mut out = Vec::new();
        rec(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
        out
    }
}
