//! The two theorems of the alternative used for robustness, stated on a
//! matrix `L` with one row per individual and one column per distribution.

use num_traits::{One, Signed, Zero};

use super::simplex::{Domain, LinearProgram, Relation, Sense};
use super::system::{FeasibilityResult, LinearSystem, Rel};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Alternative {
    /// Row weights `w ≥ 0` summing to one.
    Weights(Vec<Rational>),
    /// Column mixture `λ ≥ 0` summing to one.
    Mixture(Vec<Rational>),
}

fn shape(l: &[Vec<Rational>]) -> Result<(usize, usize)> {
    let n = l.len();
    let m = l.first().map_or(0, Vec::len);
    if n == 0 || m == 0 {
        return Err(Error::Dimension("matrix must be nonempty".into()));
    }
    if l.iter().any(|row| row.len() != m) {
        return Err(Error::Dimension("ragged matrix".into()));
    }
    Ok((n, m))
}

/// `wᵀL`, one entry per column.
pub fn weighted_columns(l: &[Vec<Rational>], w: &[Rational]) -> Vec<Rational> {
    let m = l.first().map_or(0, Vec::len);
    (0..m)
        .map(|j| {
            l.iter()
                .zip(w)
                .fold(Rational::zero(), |acc, (row, wi)| acc + wi * &row[j])
        })
        .collect()
}

/// `Lλ`, one entry per row.
pub fn mixed_rows(l: &[Vec<Rational>], lambda: &[Rational]) -> Vec<Rational> {
    l.iter().map(|row| rational::dot(row, lambda)).collect()
}

fn is_distribution(v: &[Rational]) -> bool {
    v.iter().all(|x| !x.is_negative()) && rational::sum(v).is_one()
}

/// The mixture minimizing `max_i (Lλ)_i` over the simplex, with that
/// minimum. Used to report the deepest mixture once infeasibility is known.
pub fn central_mixture(l: &[Vec<Rational>]) -> Result<(Vec<Rational>, Rational)> {
    let (_, m) = shape(l)?;
    let mut domains = vec![Domain::NonNegative; m];
    domains.push(Domain::Free);
    let mut lp = LinearProgram::new(domains, Sense::Minimize);
    let mut objective = vec![Rational::zero(); m + 1];
    objective[m] = Rational::one();
    lp.set_objective(objective);
    for row in l {
        let mut coeffs = row.clone();
        coeffs.push(-Rational::one());
        lp.add(coeffs, Relation::Le, Rational::zero());
    }
    let mut norm = vec![Rational::one(); m];
    norm.push(Rational::zero());
    lp.add(norm, Relation::Eq, Rational::one());
    let (mut x, value) = lp
        .solve()
        .optimal()
        .ok_or_else(|| Error::Internal("central mixture program has no optimum".into()))?;
    x.truncate(m);
    Ok((x, value))
}

/// Checks a strict-alternative answer against `L` by substitution.
pub fn check_strict(l: &[Vec<Rational>], alt: &Alternative) -> bool {
    let Ok((n, m)) = shape(l) else { return false };
    match alt {
        Alternative::Weights(w) => {
            w.len() == n
                && w.iter().all(|x| !x.is_negative())
                && weighted_columns(l, w).iter().all(Signed::is_positive)
        }
        Alternative::Mixture(lam) => {
            lam.len() == m
                && is_distribution(lam)
                && mixed_rows(l, lam).iter().all(|v| !v.is_positive())
        }
    }
}

/// Checks a weak-alternative answer against `L` by substitution.
pub fn check_weak(l: &[Vec<Rational>], alt: &Alternative) -> bool {
    let Ok((n, m)) = shape(l) else { return false };
    match alt {
        Alternative::Weights(w) => {
            w.len() == n
                && is_distribution(w)
                && weighted_columns(l, w).iter().all(|v| !v.is_negative())
        }
        Alternative::Mixture(lam) => {
            lam.len() == m
                && is_distribution(lam)
                && lam.iter().all(Signed::is_positive)
                && mixed_rows(l, lam).iter().all(Signed::is_negative)
        }
    }
}

/// Either `w ≥ 0` with `wᵀL ≫ 0` (normalized to sum one), or a mixture
/// `λ` with `Lλ ≤ 0`.
pub fn alternative_strict(l: &[Vec<Rational>]) -> Result<Alternative> {
    let (n, m) = shape(l)?;
    let mut sys = LinearSystem::nonnegative(n);
    for j in 0..m {
        sys.push(
            l.iter().map(|row| row[j].clone()).collect(),
            Rel::Gt,
            Rational::zero(),
        )?;
    }
    let alt = match sys.solve()? {
        FeasibilityResult::Feasible { witness } => {
            Alternative::Weights(rational::normalize_sum(&witness))
        }
        FeasibilityResult::Infeasible { .. } => Alternative::Mixture(central_mixture(l)?.0),
    };
    if !check_strict(l, &alt) {
        return Err(Error::Internal(
            "strict alternative failed substitution".into(),
        ));
    }
    Ok(alt)
}

/// Either `w ≥ 0`, `Σw = 1`, with `wᵀL ≥ 0`, or a strictly positive
/// mixture `λ` with `Lλ ≪ 0`.
pub fn alternative_weak(l: &[Vec<Rational>]) -> Result<Alternative> {
    let (n, m) = shape(l)?;
    let mut sys = LinearSystem::nonnegative(n);
    for j in 0..m {
        sys.push(
            l.iter().map(|row| row[j].clone()).collect(),
            Rel::Ge,
            Rational::zero(),
        )?;
    }
    sys.push(vec![Rational::one(); n], Rel::Eq, Rational::one())?;
    let alt = match sys.solve()? {
        FeasibilityResult::Feasible { witness } => Alternative::Weights(witness),
        FeasibilityResult::Infeasible { .. } => {
            // The central mixture has Ly ≪ 0 but may sit on the boundary;
            // shift it into the interior without losing strictness.
            let (y, _) = central_mixture(l)?;
            let slack: Vec<Rational> = mixed_rows(l, &y).into_iter().map(|v| -v).collect();
            let mut eps = Rational::one();
            for (row, s) in l.iter().zip(&slack) {
                let r = rational::sum(row);
                if r.is_positive() {
                    let bound = s / (rational::int(2) * &r);
                    if bound < eps {
                        eps = bound;
                    }
                }
            }
            let shifted: Vec<Rational> = y.iter().map(|v| v + &eps).collect();
            Alternative::Mixture(rational::normalize_sum(&shifted))
        }
    };
    if !check_weak(l, &alt) {
        return Err(Error::Internal(
            "weak alternative failed substitution".into(),
        ));
    }
    Ok(alt)
}
