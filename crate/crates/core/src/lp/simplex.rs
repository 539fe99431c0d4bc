//! Dense two-phase tableau simplex over exact rationals.
//!
//! Pivoting follows Bland's rule throughout: the entering column is the
//! lowest-index improving column and ratio ties leave by lowest basic index.
//! That guarantees termination and makes every solve deterministic.

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    NonNegative,
    Free,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

/// `optimize cᵀx` subject to linear rows; each variable is free or `≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    domains: Vec<Domain>,
    objective: Vec<Rational>,
    sense: Sense,
    constraints: Vec<Constraint>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<Rational>, value: Rational },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn optimal(self) -> Option<(Vec<Rational>, Rational)> {
        match self {
            LpOutcome::Optimal { x, value } => Some((x, value)),
            _ => None,
        }
    }
}

impl LinearProgram {
    pub fn new(domains: Vec<Domain>, sense: Sense) -> Self {
        let n = domains.len();
        LinearProgram {
            domains,
            objective: vec![Rational::zero(); n],
            sense,
            constraints: Vec::new(),
        }
    }

    pub fn nonnegative(num_vars: usize, sense: Sense) -> Self {
        Self::new(vec![Domain::NonNegative; num_vars], sense)
    }

    pub fn num_vars(&self) -> usize {
        self.domains.len()
    }

    pub fn set_objective(&mut self, c: Vec<Rational>) {
        assert_eq!(c.len(), self.num_vars(), "objective length");
        self.objective = c;
    }

    pub fn add(&mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) {
        assert_eq!(coeffs.len(), self.num_vars(), "constraint length");
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn solve(&self) -> LpOutcome {
        // Free variables become differences of two nonnegative columns.
        let mut column_of: Vec<(usize, Option<usize>)> = Vec::with_capacity(self.num_vars());
        let mut ncols = 0;
        for d in &self.domains {
            match d {
                Domain::NonNegative => {
                    column_of.push((ncols, None));
                    ncols += 1;
                }
                Domain::Free => {
                    column_of.push((ncols, Some(ncols + 1)));
                    ncols += 2;
                }
            }
        }
        let expand = |v: &[Rational]| -> Vec<Rational> {
            let mut out = vec![Rational::zero(); ncols];
            for (j, c) in v.iter().enumerate() {
                let (pos, neg) = column_of[j];
                out[pos] = c.clone();
                if let Some(neg) = neg {
                    out[neg] = -c;
                }
            }
            out
        };

        let mut c = expand(&self.objective);
        if self.sense == Sense::Minimize {
            for v in &mut c {
                *v = -v.clone();
            }
        }
        let rows: Vec<Constraint> = self
            .constraints
            .iter()
            .map(|r| Constraint {
                coeffs: expand(&r.coeffs),
                relation: r.relation,
                rhs: r.rhs.clone(),
            })
            .collect();

        let outcome = Tableau::solve_standard(ncols, &c, &rows);
        match outcome {
            LpOutcome::Optimal { x, value } => {
                let x = column_of
                    .iter()
                    .map(|&(pos, neg)| match neg {
                        Some(neg) => &x[pos] - &x[neg],
                        None => x[pos].clone(),
                    })
                    .collect();
                let value = match self.sense {
                    Sense::Maximize => value,
                    Sense::Minimize => -value,
                };
                LpOutcome::Optimal { x, value }
            }
            other => other,
        }
    }
}

struct Tableau {
    /// `m` rows of `ncols + 1` entries, the last being the right-hand side.
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    /// Reduced costs for maximization plus the negated objective value.
    obj: Vec<Rational>,
    ncols: usize,
}

enum PivotRun {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn solve_standard(nvars: usize, c: &[Rational], constraints: &[Constraint]) -> LpOutcome {
        // Columns: structural | one slack or surplus per inequality | artificials.
        let m = constraints.len();
        let nslack = constraints
            .iter()
            .filter(|r| r.relation != Relation::Eq)
            .count();
        let mut rows = Vec::with_capacity(m);
        let mut needs_artificial = Vec::with_capacity(m);
        let mut slack_col = Vec::with_capacity(m);
        let mut next_slack = nvars;
        for r in constraints {
            let flip = r.rhs.is_negative();
            let mut row: Vec<Rational> = r
                .coeffs
                .iter()
                .map(|a| if flip { -a } else { a.clone() })
                .collect();
            let rel = match (r.relation, flip) {
                (Relation::Le, true) => Relation::Ge,
                (Relation::Ge, true) => Relation::Le,
                (rel, _) => rel,
            };
            row.resize(nvars + nslack, Rational::zero());
            match rel {
                Relation::Le => {
                    row[next_slack] = Rational::one();
                    slack_col.push(Some(next_slack));
                    next_slack += 1;
                    needs_artificial.push(false);
                }
                Relation::Ge => {
                    row[next_slack] = -Rational::one();
                    slack_col.push(None);
                    next_slack += 1;
                    needs_artificial.push(true);
                }
                Relation::Eq => {
                    slack_col.push(None);
                    needs_artificial.push(true);
                }
            }
            row.push(if flip { -&r.rhs } else { r.rhs.clone() });
            rows.push(row);
        }
        let nart = needs_artificial.iter().filter(|&&a| a).count();
        let first_art = nvars + nslack;
        let ncols = first_art + nart;
        let mut basis = Vec::with_capacity(m);
        let mut next_art = first_art;
        for (i, row) in rows.iter_mut().enumerate() {
            let rhs = row.pop().expect("rhs");
            row.resize(ncols, Rational::zero());
            if needs_artificial[i] {
                row[next_art] = Rational::one();
                basis.push(next_art);
                next_art += 1;
            } else {
                basis.push(slack_col[i].expect("slack"));
            }
            row.push(rhs);
        }

        let mut t = Tableau {
            rows,
            basis,
            obj: vec![Rational::zero(); ncols + 1],
            ncols,
        };

        if nart > 0 {
            let mut phase1 = vec![Rational::zero(); ncols];
            for v in &mut phase1[first_art..] {
                *v = -Rational::one();
            }
            t.set_objective(&phase1);
            match t.run(ncols) {
                PivotRun::Optimal => {}
                PivotRun::Unbounded => unreachable!("phase I objective is bounded"),
            }
            if t.objective_value().is_negative() {
                return LpOutcome::Infeasible;
            }
            t.drive_out_artificials(first_art);
        }

        let mut full_c = c.to_vec();
        full_c.resize(ncols, Rational::zero());
        t.set_objective(&full_c);
        match t.run(first_art) {
            PivotRun::Unbounded => LpOutcome::Unbounded,
            PivotRun::Optimal => {
                let mut x = vec![Rational::zero(); nvars];
                for (i, &b) in t.basis.iter().enumerate() {
                    if b < nvars {
                        x[b] = t.rows[i][ncols].clone();
                    }
                }
                LpOutcome::Optimal {
                    x,
                    value: t.objective_value(),
                }
            }
        }
    }

    fn objective_value(&self) -> Rational {
        -&self.obj[self.ncols]
    }

    fn set_objective(&mut self, c: &[Rational]) {
        let mut obj: Vec<Rational> = c.to_vec();
        obj.push(Rational::zero());
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = obj[b].clone();
            if !cb.is_zero() {
                for (o, a) in obj.iter_mut().zip(&self.rows[i]) {
                    if !a.is_zero() {
                        *o -= &cb * a;
                    }
                }
            }
        }
        self.obj = obj;
    }

    /// Bland pivoting over columns `< allowed`.
    fn run(&mut self, allowed: usize) -> PivotRun {
        loop {
            let Some(enter) = (0..allowed).find(|&j| self.obj[j].is_positive()) else {
                return PivotRun::Optimal;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                let a = &row[enter];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &row[self.ncols] / a;
                let better = match &leave {
                    None => true,
                    Some((li, best)) => {
                        ratio < *best || (ratio == *best && self.basis[i] < self.basis[*li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((row, _)) = leave else {
                return PivotRun::Unbounded;
            };
            self.pivot(row, enter);
        }
    }

    fn pivot(&mut self, r: usize, col: usize) {
        let p = self.rows[r][col].clone();
        if !p.is_one() {
            for v in &mut self.rows[r] {
                if !v.is_zero() {
                    *v /= &p;
                }
            }
        }
        let pivot_row = std::mem::take(&mut self.rows[r]);
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            eliminate(row, &pivot_row, col);
        }
        eliminate(&mut self.obj, &pivot_row, col);
        self.rows[r] = pivot_row;
        self.basis[r] = col;
    }

    /// After a successful phase I every artificial still basic sits at zero.
    /// Pivot it out on any structural or slack column; if the row has none,
    /// the row is redundant and is dropped.
    fn drive_out_artificials(&mut self, first_art: usize) {
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] >= first_art {
                match (0..first_art).find(|&j| !self.rows[i][j].is_zero()) {
                    Some(j) => self.pivot(i, j),
                    None => {
                        self.rows.remove(i);
                        self.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
    }
}

fn eliminate(row: &mut [Rational], pivot_row: &[Rational], col: usize) {
    let f = row[col].clone();
    if f.is_zero() {
        return;
    }
    for (v, a) in row.iter_mut().zip(pivot_row) {
        if !a.is_zero() {
            *v -= &f * a;
        }
    }
}
