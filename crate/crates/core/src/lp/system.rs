//! Mixed strict / non-strict / equality systems and their exact answer:
//! a witness that satisfies every row, or a certificate that no such point
//! exists.
//!
//! A certificate is one multiplier `y_k` per row (`y_k ≥ 0` on `≥`/`>` rows,
//! unrestricted on `=` rows) with combined row `c = Σ y_k a_k` and combined
//! right-hand side `β = Σ y_k b_k` such that
//!
//! * `c_j = 0` for free variables and `c_j ≤ 0` for nonnegative ones, and
//! * `β > 0`, or `β ≥ 0` with `y_k > 0` on at least one strict row.
//!
//! Any feasible `v` would give `0 ≥ cᵀv ≥ β`, strictly when a strict row
//! carries weight, which is impossible.

use std::fmt;

use num_traits::{One, Signed, Zero};

use super::simplex::{Domain, LinearProgram, LpOutcome, Relation, Sense};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rel {
    Ge,
    Gt,
    Eq,
}

impl Rel {
    fn token(self) -> &'static str {
        match self {
            Rel::Ge => ">=",
            Rel::Gt => ">",
            Rel::Eq => "=",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarSign {
    Free,
    NonNegative,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Row {
    pub coeffs: Vec<Rational>,
    pub rel: Rel,
    pub rhs: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSystem {
    var_signs: Vec<VarSign>,
    rows: Vec<Row>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FeasibilityResult {
    Feasible { witness: Vec<Rational> },
    Infeasible { certificate: Vec<Rational> },
}

impl FeasibilityResult {
    pub fn is_feasible(&self) -> bool {
        matches!(self, FeasibilityResult::Feasible { .. })
    }

    pub fn witness(&self) -> Option<&[Rational]> {
        match self {
            FeasibilityResult::Feasible { witness } => Some(witness),
            FeasibilityResult::Infeasible { .. } => None,
        }
    }
}

impl LinearSystem {
    pub fn new(var_signs: Vec<VarSign>) -> Self {
        LinearSystem {
            var_signs,
            rows: Vec::new(),
        }
    }

    pub fn nonnegative(num_vars: usize) -> Self {
        Self::new(vec![VarSign::NonNegative; num_vars])
    }

    pub fn num_vars(&self) -> usize {
        self.var_signs.len()
    }

    pub fn var_signs(&self) -> &[VarSign] {
        &self.var_signs
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn push(&mut self, coeffs: Vec<Rational>, rel: Rel, rhs: Rational) -> Result<()> {
        if coeffs.len() != self.num_vars() {
            return Err(Error::Dimension(format!(
                "row has {} coefficients, system has {} variables",
                coeffs.len(),
                self.num_vars()
            )));
        }
        self.rows.push(Row { coeffs, rel, rhs });
        Ok(())
    }

    fn is_homogeneous(&self) -> bool {
        self.rows.iter().all(|r| r.rhs.is_zero())
    }

    fn has_strict(&self) -> bool {
        self.rows.iter().any(|r| r.rel == Rel::Gt)
    }

    /// Exact substitution check.
    pub fn is_witness(&self, v: &[Rational]) -> bool {
        if v.len() != self.num_vars() {
            return false;
        }
        let signs_ok = self
            .var_signs
            .iter()
            .zip(v)
            .all(|(s, x)| *s == VarSign::Free || !x.is_negative());
        signs_ok
            && self.rows.iter().all(|r| {
                let lhs = rational::dot(&r.coeffs, v);
                match r.rel {
                    Rel::Ge => lhs >= r.rhs,
                    Rel::Gt => lhs > r.rhs,
                    Rel::Eq => lhs == r.rhs,
                }
            })
    }

    /// Checks the certificate conditions in the module docs.
    pub fn is_infeasibility_certificate(&self, y: &[Rational]) -> bool {
        if y.len() != self.rows.len() {
            return false;
        }
        let mut strict_weight = Rational::zero();
        for (r, yk) in self.rows.iter().zip(y) {
            match r.rel {
                Rel::Eq => {}
                Rel::Ge => {
                    if yk.is_negative() {
                        return false;
                    }
                }
                Rel::Gt => {
                    if yk.is_negative() {
                        return false;
                    }
                    strict_weight += yk;
                }
            }
        }
        for (j, sign) in self.var_signs.iter().enumerate() {
            let cj = self
                .rows
                .iter()
                .zip(y)
                .fold(Rational::zero(), |acc, (r, yk)| acc + yk * &r.coeffs[j]);
            let ok = match sign {
                VarSign::Free => cj.is_zero(),
                VarSign::NonNegative => !cj.is_positive(),
            };
            if !ok {
                return false;
            }
        }
        let beta = self
            .rows
            .iter()
            .zip(y)
            .fold(Rational::zero(), |acc, (r, yk)| acc + yk * &r.rhs);
        beta.is_positive() || (!beta.is_negative() && strict_weight.is_positive())
    }

    /// Decides feasibility exactly.
    ///
    /// Strict rows share one slack `δ ≥ 0` (`aᵀv − δ ≥ b`) and `δ` is
    /// maximized; the system is feasible iff the optimum is positive. For a
    /// homogeneous system the variables (sign-split into nonnegative parts)
    /// are normalized to sum one, which yields the max-margin witness on the
    /// simplex; otherwise `δ ≤ 1` keeps the program bounded. On infeasibility
    /// the alternative system is solved for a certificate. Both answers are
    /// re-verified by substitution before they are returned.
    pub fn solve(&self) -> Result<FeasibilityResult> {
        if self.rows.is_empty() {
            return Err(Error::Dimension("system has no rows".into()));
        }
        if let Some(witness) = self.search_witness() {
            if !self.is_witness(&witness) {
                return Err(Error::Internal(
                    "feasibility witness failed substitution".into(),
                ));
            }
            return Ok(FeasibilityResult::Feasible { witness });
        }
        let certificate = self.search_certificate().ok_or_else(|| {
            Error::Internal("neither a witness nor a certificate was found".into())
        })?;
        if !self.is_infeasibility_certificate(&certificate) {
            return Err(Error::Internal("certificate failed verification".into()));
        }
        Ok(FeasibilityResult::Infeasible { certificate })
    }

    fn search_witness(&self) -> Option<Vec<Rational>> {
        let nv = self.num_vars();
        // Nonnegative parts: one column per nonnegative variable, two per free.
        let mut parts: Vec<(usize, Rational)> = Vec::new();
        for (j, s) in self.var_signs.iter().enumerate() {
            parts.push((j, Rational::one()));
            if *s == VarSign::Free {
                parts.push((j, -Rational::one()));
            }
        }
        let strict = self.has_strict();
        let ncols = parts.len() + usize::from(strict);
        let delta = parts.len();
        let mut lp = LinearProgram::nonnegative(ncols, Sense::Maximize);
        if strict {
            let mut c = vec![Rational::zero(); ncols];
            c[delta] = Rational::one();
            lp.set_objective(c);
        }
        for r in &self.rows {
            let mut row: Vec<Rational> = parts.iter().map(|(j, s)| s * &r.coeffs[*j]).collect();
            if strict {
                row.push(if r.rel == Rel::Gt {
                    -Rational::one()
                } else {
                    Rational::zero()
                });
            }
            let rel = match r.rel {
                Rel::Eq => Relation::Eq,
                Rel::Ge | Rel::Gt => Relation::Ge,
            };
            lp.add(row, rel, r.rhs.clone());
        }
        if strict {
            if self.is_homogeneous() {
                let mut norm = vec![Rational::one(); ncols];
                norm[delta] = Rational::zero();
                lp.add(norm, Relation::Eq, Rational::one());
            } else {
                let mut cap = vec![Rational::zero(); ncols];
                cap[delta] = Rational::one();
                lp.add(cap, Relation::Le, Rational::one());
            }
        }
        let (x, value) = match lp.solve() {
            LpOutcome::Optimal { x, value } => (x, value),
            LpOutcome::Infeasible => return None,
            LpOutcome::Unbounded => unreachable!("feasibility program is bounded"),
        };
        if strict && !value.is_positive() {
            return None;
        }
        let mut v = vec![Rational::zero(); nv];
        for ((j, s), xk) in parts.iter().zip(&x) {
            v[*j] += s * xk;
        }
        Some(v)
    }

    fn search_certificate(&self) -> Option<Vec<Rational>> {
        let m = self.rows.len();
        let domains = self
            .rows
            .iter()
            .map(|r| match r.rel {
                Rel::Eq => Domain::Free,
                _ => Domain::NonNegative,
            })
            .collect();
        let mut lp = LinearProgram::new(domains, Sense::Maximize);
        for (j, s) in self.var_signs.iter().enumerate() {
            let col: Vec<Rational> = self.rows.iter().map(|r| r.coeffs[j].clone()).collect();
            let rel = match s {
                VarSign::Free => Relation::Eq,
                VarSign::NonNegative => Relation::Le,
            };
            lp.add(col, rel, Rational::zero());
        }
        let beta: Vec<Rational> = self.rows.iter().map(|r| r.rhs.clone()).collect();
        lp.add(beta.clone(), Relation::Ge, Rational::zero());
        let scale: Vec<Rational> = self
            .rows
            .iter()
            .zip(&beta)
            .map(|(r, b)| {
                if r.rel == Rel::Gt {
                    b + Rational::one()
                } else {
                    b.clone()
                }
            })
            .collect();
        lp.add(scale, Relation::Eq, Rational::one());
        let y = lp.solve().optimal()?.0;
        debug_assert_eq!(y.len(), m);
        Some(y)
    }

    /// One row per line, `c1,…,ck rel rhs`, preceded by a `vars` line giving
    /// each variable's sign (`+` nonnegative, `f` free).
    pub fn dump(&self) -> String {
        self.to_string()
    }

    pub fn parse_dump(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines
            .next()
            .and_then(|l| l.strip_prefix("vars "))
            .ok_or_else(|| Error::invalid("dump", "missing `vars` line"))?;
        let signs = header
            .split(',')
            .map(|t| match t.trim() {
                "+" => Ok(VarSign::NonNegative),
                "f" => Ok(VarSign::Free),
                other => Err(Error::invalid("dump", format!("variable sign {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        let mut sys = LinearSystem::new(signs);
        for line in lines {
            let mut it = line.split_whitespace();
            let (Some(coeffs), Some(rel), Some(rhs), None) =
                (it.next(), it.next(), it.next(), it.next())
            else {
                return Err(Error::invalid("dump", format!("row {line:?}")));
            };
            let coeffs = rational::parse_vec(&coeffs.split(',').collect::<Vec<_>>())?;
            let rel = match rel {
                ">=" => Rel::Ge,
                ">" => Rel::Gt,
                "=" => Rel::Eq,
                other => return Err(Error::invalid("dump", format!("relation {other:?}"))),
            };
            sys.push(coeffs, rel, rational::parse(rhs)?)?;
        }
        Ok(sys)
    }
}

impl fmt::Display for LinearSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let signs: Vec<&str> = self
            .var_signs
            .iter()
            .map(|s| match s {
                VarSign::NonNegative => "+",
                VarSign::Free => "f",
            })
            .collect();
        writeln!(f, "vars {}", signs.join(","))?;
        for r in &self.rows {
            writeln!(
                f,
                "{} {} {}",
                rational::format_vec(&r.coeffs).join(","),
                r.rel.token(),
                rational::format(&r.rhs)
            )?;
        }
        Ok(())
    }
}

/// Free-function form of [`LinearSystem::solve`].
pub fn solve_feasibility(system: &LinearSystem) -> Result<FeasibilityResult> {
    system.solve()
}
