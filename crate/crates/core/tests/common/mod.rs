//! Brute-force oracles and fixtures shared by the integration tests. Nothing
//! here calls the LP code.
#![allow(dead_code)]

use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use robustvote::profile::{DecisionProfile, Permutation};
use robustvote::rational::{int, ratio};
use robustvote::{Distribution, RandomVotingRule, Rational, VotingRule};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_rule(rng: &mut ChaCha8Rng, n: usize) -> VotingRule {
    let code = rng.gen_range(0..1u64 << (1u64 << n));
    VotingRule::from_code(n, code).unwrap()
}

/// Outcomes drawn from {−1, −1/2, 0, 1/2, 1} and a few odd fractions.
pub fn random_random_rule(rng: &mut ChaCha8Rng, n: usize) -> RandomVotingRule {
    let vals = [
        int(-1),
        ratio(-1, 2),
        int(0),
        ratio(1, 3),
        ratio(1, 2),
        int(1),
    ];
    let outs = (0..1usize << n)
        .map(|_| vals[rng.gen_range(0..vals.len())].clone())
        .collect();
    RandomVotingRule::new(n, outs).unwrap()
}

/// Integer masses normalized; `positive` forces full support.
pub fn random_distribution(rng: &mut ChaCha8Rng, n: usize, positive: bool) -> Distribution {
    let lo = if positive { 1 } else { 0 };
    let mut masses: Vec<i64> = (0..1usize << n).map(|_| rng.gen_range(lo..=9)).collect();
    if masses.iter().all(|m| *m == 0) {
        let k = rng.gen_range(0..masses.len());
        masses[k] = 1;
    }
    let total: i64 = masses.iter().sum();
    Distribution::new(n, masses.iter().map(|m| ratio(*m, total)).collect()).unwrap()
}

pub fn small_rational() -> impl Strategy<Value = Rational> {
    (-4i64..=4, 1i64..=3).prop_map(|(a, b)| ratio(a, b))
}

pub fn matrix(
    rows: std::ops::RangeInclusive<usize>,
    cols: std::ops::RangeInclusive<usize>,
) -> impl Strategy<Value = Vec<Vec<Rational>>> {
    (rows, cols).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(small_rational(), c), r)
    })
}

/// `r_i` as the mass of profiles where the rule agrees with `i`.
pub fn direct_responsiveness(rule: &VotingRule, p: &Distribution) -> Vec<Rational> {
    (1..=rule.n())
        .map(|i| {
            DecisionProfile::all(rule.n())
                .filter(|x| rule.outcome(*x) == x.vote(i))
                .fold(Rational::zero(), |acc, x| acc + p.prob(x))
        })
        .collect()
}

/// `r_i = (Σ_x p(x) φ̄(x) x_i + 1)/2` straight from the table.
pub fn direct_responsiveness_random(rule: &RandomVotingRule, p: &Distribution) -> Vec<Rational> {
    (1..=rule.n())
        .map(|i| {
            let e = DecisionProfile::all(rule.n()).fold(Rational::zero(), |acc, x| {
                acc + p.prob(x) * rule.outcome(x) * int(x.vote(i).into())
            });
            (e + Rational::one()) / int(2)
        })
        .collect()
}

/// `r(φ, p_j)` for each point, as an `n × m` matrix.
pub fn responsiveness_matrix(rule: &VotingRule, points: &[Distribution]) -> Vec<Vec<Rational>> {
    let cols: Vec<Vec<Rational>> = points
        .iter()
        .map(|p| direct_responsiveness(rule, p))
        .collect();
    (0..rule.n())
        .map(|i| cols.iter().map(|c| c[i].clone()).collect())
        .collect()
}

/// Unique solution of a square system by exact Gauss–Jordan elimination.
pub fn solve_square(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = a.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = Rational::one() / &a[col][col];
        for v in a[col].iter_mut() {
            *v = &*v * &inv;
        }
        b[col] = &b[col] * &inv;
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pivot_row = a[col].clone();
                for (v, pv) in a[r].iter_mut().zip(&pivot_row) {
                    *v -= &f * pv;
                }
                let t = &f * &b[col];
                b[r] -= t;
            }
        }
    }
    Some(b)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// `max_{w ∈ simplex} min_j (wᵀL)_j` by enumerating the vertices of the
/// arrangement: every optimum sits where `n − 1` of the hyperplanes
/// `w_i = 0` and `(wᵀL)_j = (wᵀL)_k` meet the simplex's affine hull.
pub fn max_min_on_simplex(l: &[Vec<Rational>]) -> Rational {
    let n = l.len();
    let m = l[0].len();
    let value = |w: &[Rational]| {
        (0..m)
            .map(|j| (0..n).fold(Rational::zero(), |acc, i| acc + &w[i] * &l[i][j]))
            .min()
            .unwrap()
    };
    let mut planes: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|k| if k == i { int(1) } else { int(0) })
                .collect()
        })
        .collect();
    for j in 0..m {
        for k in j + 1..m {
            planes.push((0..n).map(|i| &l[i][j] - &l[i][k]).collect());
        }
    }
    let mut best: Option<Rational> = None;
    for s in subsets(planes.len(), n - 1) {
        let mut a: Vec<Vec<Rational>> = s.iter().map(|&h| planes[h].clone()).collect();
        a.push(vec![int(1); n]);
        let mut b = vec![int(0); n - 1];
        b.push(int(1));
        let Some(w) = solve_square(a, b) else {
            continue;
        };
        if w.iter().any(Signed::is_negative) {
            continue;
        }
        let v = value(&w);
        if best.as_ref().is_none_or(|b| v > *b) {
            best = Some(v);
        }
    }
    best.expect("the simplex has vertices")
}

/// Anonymity by its definition: invariance under every permutation.
pub fn anonymous_by_definition(rule: &VotingRule) -> bool {
    Permutation::all(rule.n()).iter().all(|pi| {
        DecisionProfile::all(rule.n()).all(|x| rule.outcome(x) == rule.outcome(x.permuted(pi)))
    })
}

/// `φ(x)·Σ w_i x_i ≥ 0` (ties allowed) or `> 0` at every profile.
pub fn is_wmr_with(rule: &VotingRule, w: &[i64], ties_allowed: bool) -> bool {
    DecisionProfile::all(rule.n()).all(|x| {
        let s: i64 = (1..=rule.n())
            .map(|i| w[i - 1] * i64::from(x.vote(i)))
            .sum();
        let phi = i64::from(rule.outcome(x));
        if ties_allowed {
            phi * s >= 0
        } else {
            phi * s > 0
        }
    })
}

/// Integer weight vectors with entries in `lo..=hi`, nonzero.
pub fn weight_grid(n: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v: Vec<i64>| {
                (lo..=hi).map(move |x| {
                    let mut v = v.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
    }
    out.retain(|v| v.iter().any(|x| *x != 0));
    out
}

/// The degenerate distribution at the profile where only `i` votes `−1`.
pub fn one_dissenter(n: usize, i: usize) -> Distribution {
    let all_plus = DecisionProfile::new(n, (1 << n) - 1).unwrap();
    Distribution::degenerate(all_plus.with_vote(i, -1))
}

/// Separates SMR from the two-thirds rule at n = 9: all-`+` with `1 − ε`,
/// the rest spread evenly over the five-supporter profiles.
pub fn majority_vs_two_thirds(eps: &Rational) -> Distribution {
    let n = 9;
    let all_plus = DecisionProfile::new(n, (1 << n) - 1).unwrap();
    let mut atoms = vec![(all_plus, Rational::one() - eps)];
    let fives: Vec<_> = DecisionProfile::all(n)
        .filter(|x| x.count_plus() == 5)
        .collect();
    let each = eps / int(fives.len() as i64);
    atoms.extend(fives.into_iter().map(|x| (x, each.clone())));
    Distribution::from_atoms(n, &atoms).unwrap()
}
