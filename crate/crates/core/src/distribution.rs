//! Probability distributions over profiles and finitely generated sets of them.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::profile::{check_voters, DecisionProfile, Permutation};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Distribution {
    n: usize,
    probs: Vec<Rational>,
}

impl Distribution {
    pub fn new(n: usize, probs: Vec<Rational>) -> Result<Self> {
        check_voters(n)?;
        if probs.len() != 1 << n {
            return Err(Error::Dimension(format!(
                "distribution has {} entries, expected {}",
                probs.len(),
                1usize << n
            )));
        }
        if let Some(neg) = probs.iter().find(|p| p.is_negative()) {
            return Err(Error::invalid(
                "prob",
                format!("negative probability {}", rational::format(neg)),
            ));
        }
        let total = rational::sum(&probs);
        if !total.is_one() {
            return Err(Error::invalid(
                "prob",
                format!("probabilities sum to {}, not 1", rational::format(&total)),
            ));
        }
        Ok(Distribution { n, probs })
    }

    /// Builds a distribution from `(profile, probability)` atoms; repeated
    /// profiles accumulate and absent profiles get zero.
    pub fn from_atoms(n: usize, atoms: &[(DecisionProfile, Rational)]) -> Result<Self> {
        check_voters(n)?;
        let mut probs = vec![Rational::zero(); 1 << n];
        for (x, p) in atoms {
            if x.n() != n {
                return Err(Error::Dimension(format!(
                    "atom {x} has {} individuals, expected {n}",
                    x.n()
                )));
            }
            probs[x.index()] += p;
        }
        Self::new(n, probs)
    }

    pub fn uniform(n: usize) -> Result<Self> {
        check_voters(n)?;
        let p = rational::ratio(1, 1 << n);
        Ok(Distribution {
            n,
            probs: vec![p; 1 << n],
        })
    }

    pub fn degenerate(x: DecisionProfile) -> Self {
        let mut probs = vec![Rational::zero(); 1 << x.n()];
        probs[x.index()] = Rational::one();
        Distribution { n: x.n(), probs }
    }

    /// Uniform over the profiles accepted by `keep`.
    pub fn uniform_over(n: usize, keep: impl Fn(DecisionProfile) -> bool) -> Result<Self> {
        check_voters(n)?;
        let support: Vec<_> = DecisionProfile::all(n).filter(|&x| keep(x)).collect();
        if support.is_empty() {
            return Err(Error::invalid("support", "empty"));
        }
        let p = rational::ratio(1, support.len() as i64);
        let atoms: Vec<_> = support.into_iter().map(|x| (x, p.clone())).collect();
        Self::from_atoms(n, &atoms)
    }

    /// `Σⱼ λⱼ pⱼ`; the weights must be a probability vector.
    pub fn mixture(points: &[Distribution], weights: &[Rational]) -> Result<Self> {
        if points.is_empty() || points.len() != weights.len() {
            return Err(Error::Dimension(format!(
                "{} points but {} mixture weights",
                points.len(),
                weights.len()
            )));
        }
        let n = points[0].n;
        let mut probs = vec![Rational::zero(); 1 << n];
        for (p, w) in points.iter().zip(weights) {
            if p.n != n {
                return Err(Error::Dimension("mixture of different n".into()));
            }
            for (acc, q) in probs.iter_mut().zip(&p.probs) {
                *acc += w * q;
            }
        }
        Self::new(n, probs)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn probs(&self) -> &[Rational] {
        &self.probs
    }

    pub fn prob(&self, x: DecisionProfile) -> &Rational {
        &self.probs[x.index()]
    }

    /// Profiles with positive probability, ascending.
    pub fn support(&self) -> impl Iterator<Item = (DecisionProfile, &Rational)> {
        self.probs
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .map(move |(i, p)| (DecisionProfile::new_unchecked(self.n, i), p))
    }

    /// Every profile has positive probability.
    pub fn is_strictly_positive(&self) -> bool {
        self.probs.iter().all(Signed::is_positive)
    }

    /// `p^π(x) = p(x^π)`.
    pub fn permuted(&self, pi: &Permutation) -> Result<Self> {
        if pi.n() != self.n {
            return Err(Error::Permutation(format!(
                "permutation on {} individuals, distribution on {}",
                pi.n(),
                self.n
            )));
        }
        Ok(Distribution {
            n: self.n,
            probs: DecisionProfile::all(self.n)
                .map(|x| self.prob(x.permuted(pi)).clone())
                .collect(),
        })
    }

    /// `p_k`: probability that exactly `k` individuals vote `+1`, `k = 0..=n`.
    pub fn count_probs(&self) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.n + 1];
        for (x, p) in self.support() {
            out[x.count_plus()] += p;
        }
        out
    }
}

/// The extreme points of a polytope of distributions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistributionSet {
    n: usize,
    extreme_points: Vec<Distribution>,
}

impl DistributionSet {
    /// Duplicate points are dropped, keeping the first occurrence.
    pub fn new(points: Vec<Distribution>) -> Result<Self> {
        let first = points
            .first()
            .ok_or_else(|| Error::invalid("extreme_points", "empty"))?;
        let n = first.n;
        let mut extreme_points: Vec<Distribution> = Vec::with_capacity(points.len());
        for p in points {
            if p.n != n {
                return Err(Error::Dimension(format!(
                    "extreme points mix n = {n} and n = {}",
                    p.n
                )));
            }
            if !extreme_points.contains(&p) {
                extreme_points.push(p);
            }
        }
        Ok(DistributionSet { n, extreme_points })
    }

    /// The `2ⁿ` degenerate distributions, i.e. the vertices of Δ(𝒳).
    pub fn all_degenerate(n: usize) -> Result<Self> {
        check_voters(n)?;
        Self::new(
            DecisionProfile::all(n)
                .map(Distribution::degenerate)
                .collect(),
        )
    }

    /// Orbit of the points under relabeling, deduplicated. Built by closing
    /// under adjacent transpositions, so symmetric points stay cheap at any n.
    pub fn permutation_closure(points: Vec<Distribution>) -> Result<Self> {
        let mut set = Self::new(points)?;
        let swaps = adjacent_transpositions(set.n)?;
        let mut k = 0;
        while k < set.extreme_points.len() {
            for pi in &swaps {
                let q = set.extreme_points[k].permuted(pi)?;
                if !set.extreme_points.contains(&q) {
                    set.extreme_points.push(q);
                }
            }
            k += 1;
        }
        Ok(set)
    }

    /// Whether relabeling maps the extreme points onto themselves. Adjacent
    /// transpositions generate every permutation, so checking those suffices.
    pub fn is_closed_under_relabeling(&self) -> Result<bool> {
        for pi in adjacent_transpositions(self.n)? {
            for p in &self.extreme_points {
                if !self.contains_point(&p.permuted(&pi)?) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn extreme_points(&self) -> &[Distribution] {
        &self.extreme_points
    }

    pub fn len(&self) -> usize {
        self.extreme_points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.extreme_points.is_empty()
    }

    pub fn contains_point(&self, p: &Distribution) -> bool {
        self.extreme_points.contains(p)
    }
}

fn adjacent_transpositions(n: usize) -> Result<Vec<Permutation>> {
    (1..n)
        .map(|a| Permutation::transposition(n, a, a + 1))
        .collect()
}
