//! Exact rational linear programming.
//!
//! A dense two-phase simplex method with Bland's pivot rule. Problems in this
//! crate are small (at most a few hundred variables), so the tableau is kept
//! dense and every entry is an exact [`Rational`]. Bland's rule guarantees
//! termination on degenerate programs.
//!
//! Variables are free unless bounded through [`LinearProgram::set_bounds`].

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::dot;
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub coefficients: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Constraint {
    pub fn is_satisfied_by(&self, x: &[Rational]) -> bool {
        let lhs = dot(&self.coefficients, x);
        match self.relation {
            Relation::Le => lhs <= self.rhs,
            Relation::Eq => lhs == self.rhs,
            Relation::Ge => lhs >= self.rhs,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Bounds {
    pub lower: Option<Rational>,
    pub upper: Option<Rational>,
}

impl Bounds {
    fn contains(&self, v: &Rational) -> bool {
        self.lower.as_ref().is_none_or(|l| v >= l) && self.upper.as_ref().is_none_or(|u| v <= u)
    }
}

/// Maximize `⟨objective, x⟩` subject to the constraints and bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearProgram {
    pub num_vars: usize,
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
    pub bounds: Vec<Bounds>,
}

impl LinearProgram {
    /// A program over `num_vars` free variables with a zero objective.
    pub fn new(num_vars: usize) -> Self {
        Self {
            num_vars,
            objective: vec![Rational::zero(); num_vars],
            constraints: Vec::new(),
            bounds: vec![Bounds::default(); num_vars],
        }
    }

    pub fn maximize(&mut self, objective: Vec<Rational>) -> &mut Self {
        self.objective = objective;
        self
    }

    pub fn add_constraint(
        &mut self,
        coefficients: Vec<Rational>,
        relation: Relation,
        rhs: Rational,
    ) -> &mut Self {
        self.constraints.push(Constraint {
            coefficients,
            relation,
            rhs,
        });
        self
    }

    pub fn set_bounds(
        &mut self,
        var: usize,
        lower: Option<Rational>,
        upper: Option<Rational>,
    ) -> &mut Self {
        self.bounds[var] = Bounds { lower, upper };
        self
    }

    pub fn nonnegative(&mut self, var: usize) -> &mut Self {
        self.set_bounds(var, Some(Rational::zero()), None)
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::MalformedProgram(msg));
        if self.objective.len() != self.num_vars {
            return bad(format!(
                "objective has {} coefficients for {} variables",
                self.objective.len(),
                self.num_vars
            ));
        }
        if self.bounds.len() != self.num_vars {
            return bad(format!("{} bounds for {} variables", self.bounds.len(), self.num_vars));
        }
        for (i, c) in self.constraints.iter().enumerate() {
            if c.coefficients.len() != self.num_vars {
                return bad(format!(
                    "constraint {i} has {} coefficients for {} variables",
                    c.coefficients.len(),
                    self.num_vars
                ));
            }
        }
        Ok(())
    }

    /// Exact check of every constraint and bound.
    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        x.len() == self.num_vars
            && self.constraints.iter().all(|c| c.is_satisfied_by(x))
            && self.bounds.iter().zip(x).all(|(b, v)| b.contains(v))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpResult {
    Optimal {
        optimum: Rational,
        point: Vec<Rational>,
    },
    Infeasible,
    Unbounded,
}

impl LpResult {
    pub fn optimum(&self) -> Option<&Rational> {
        match self {
            LpResult::Optimal { optimum, .. } => Some(optimum),
            _ => None,
        }
    }

    pub fn point(&self) -> Option<&[Rational]> {
        match self {
            LpResult::Optimal { point, .. } => Some(point),
            _ => None,
        }
    }
}

pub fn solve(lp: &LinearProgram) -> Result<LpResult> {
    lp.validate()?;
    let mut std = StandardForm::build(lp);
    if !std.phase_one() {
        return Ok(LpResult::Infeasible);
    }
    let cost = std.cost_vector(&lp.objective);
    if !std.tableau.optimize(&cost, std.num_structural) {
        return Ok(LpResult::Unbounded);
    }
    let point = std.recover(lp);
    assert!(lp.is_feasible(&point), "simplex returned an infeasible point");
    let optimum = dot(&lp.objective, &point);
    Ok(LpResult::Optimal { optimum, point })
}

/// Phase one only: any point satisfying the constraints and bounds, or `None`
/// when the program is infeasible. The objective is ignored.
pub fn feasible_point(lp: &LinearProgram) -> Result<Option<Vec<Rational>>> {
    lp.validate()?;
    let mut std = StandardForm::build(lp);
    if !std.phase_one() {
        return Ok(None);
    }
    let point = std.recover(lp);
    assert!(lp.is_feasible(&point), "phase one returned an infeasible point");
    Ok(Some(point))
}

/// How an original variable is expressed in nonnegative standard-form columns.
#[derive(Debug, Clone)]
enum Substitution {
    /// x = lower + y
    Shifted { col: usize, lower: Rational },
    /// x = upper - y
    Reflected { col: usize, upper: Rational },
    /// x = y⁺ - y⁻
    Split { pos: usize, neg: usize },
}

struct StandardForm {
    subs: Vec<Substitution>,
    /// Columns holding original (substituted) variables and slacks. Columns
    /// at or beyond this index are artificial.
    num_structural: usize,
    tableau: Tableau,
}

impl StandardForm {
    fn build(lp: &LinearProgram) -> Self {
        let mut subs = Vec::with_capacity(lp.num_vars);
        let mut ncols = 0;
        for b in &lp.bounds {
            let sub = match (&b.lower, &b.upper) {
                (Some(l), _) => Substitution::Shifted {
                    col: ncols,
                    lower: l.clone(),
                },
                (None, Some(u)) => Substitution::Reflected {
                    col: ncols,
                    upper: u.clone(),
                },
                (None, None) => {
                    ncols += 1;
                    Substitution::Split {
                        pos: ncols - 1,
                        neg: ncols,
                    }
                }
            };
            ncols += 1;
            subs.push(sub);
        }
        let num_vars_std = ncols;

        // Rows over the substituted columns: (coefficients, relation, rhs).
        let mut rows: Vec<(Vec<Rational>, Relation, Rational)> = Vec::new();
        for c in &lp.constraints {
            let mut coeffs = vec![Rational::zero(); num_vars_std];
            let mut rhs = c.rhs.clone();
            for (a, sub) in c.coefficients.iter().zip(&subs) {
                if a.is_zero() {
                    continue;
                }
                match sub {
                    Substitution::Shifted { col, lower } => {
                        coeffs[*col] += a;
                        rhs -= a * lower;
                    }
                    Substitution::Reflected { col, upper } => {
                        coeffs[*col] -= a;
                        rhs -= a * upper;
                    }
                    Substitution::Split { pos, neg } => {
                        coeffs[*pos] += a;
                        coeffs[*neg] -= a;
                    }
                }
            }
            rows.push((coeffs, c.relation, rhs));
        }
        for (b, sub) in lp.bounds.iter().zip(&subs) {
            if let (Some(l), Some(u), Substitution::Shifted { col, .. }) = (&b.lower, &b.upper, sub) {
                let mut coeffs = vec![Rational::zero(); num_vars_std];
                coeffs[*col] = Rational::from_integer(1.into());
                rows.push((coeffs, Relation::Le, u - l));
            }
        }

        let num_slack = rows.iter().filter(|r| r.1 != Relation::Eq).count();
        let num_structural = num_vars_std + num_slack;

        // Slack columns, sign normalization, and the initial basis.
        let mut matrix: Vec<Vec<Rational>> = Vec::with_capacity(rows.len());
        let mut basis = Vec::with_capacity(rows.len());
        let mut needs_artificial = Vec::new();
        let mut slack_col = num_vars_std;
        for (i, (coeffs, rel, rhs)) in rows.into_iter().enumerate() {
            let mut row = coeffs;
            row.resize(num_structural, Rational::zero());
            let mut slack = None;
            match rel {
                Relation::Le => {
                    row[slack_col] = Rational::from_integer(1.into());
                    slack = Some(slack_col);
                    slack_col += 1;
                }
                Relation::Ge => {
                    row[slack_col] = Rational::from_integer((-1).into());
                    slack = Some(slack_col);
                    slack_col += 1;
                }
                Relation::Eq => {}
            }
            let mut rhs = rhs;
            if rhs.is_negative() {
                for v in row.iter_mut() {
                    *v = -&*v;
                }
                rhs = -rhs;
            }
            row.push(rhs);
            match slack.filter(|&s| row[s] == Rational::from_integer(1.into())) {
                Some(s) => basis.push(s),
                None => {
                    basis.push(usize::MAX);
                    needs_artificial.push(i);
                }
            }
            matrix.push(row);
        }

        // Artificial columns go between the structural columns and the rhs.
        let num_art = needs_artificial.len();
        for row in matrix.iter_mut() {
            let rhs = row.pop().expect("rhs");
            row.extend(std::iter::repeat_n(Rational::zero(), num_art));
            row.push(rhs);
        }
        for (k, &i) in needs_artificial.iter().enumerate() {
            let col = num_structural + k;
            matrix[i][col] = Rational::from_integer(1.into());
            basis[i] = col;
        }

        Self {
            subs,
            num_structural,
            tableau: Tableau {
                rows: matrix,
                basis,
                ncols: num_structural + num_art,
                objective: Vec::new(),
            },
        }
    }

    /// Drives the artificial variables to zero. Returns `false` when infeasible.
    fn phase_one(&mut self) -> bool {
        let ncols = self.tableau.ncols;
        if ncols == self.num_structural {
            return true;
        }
        let mut cost = vec![Rational::zero(); ncols];
        for c in cost.iter_mut().skip(self.num_structural) {
            *c = Rational::from_integer((-1).into());
        }
        let bounded = self.tableau.optimize(&cost, ncols);
        debug_assert!(bounded, "phase one objective is bounded above by zero");
        if self.tableau.objective_value().is_negative() {
            return false;
        }
        // Pivot remaining (zero-valued) artificials out, dropping redundant rows.
        let mut i = 0;
        while i < self.tableau.rows.len() {
            if self.tableau.basis[i] >= self.num_structural {
                match (0..self.num_structural).find(|&j| !self.tableau.rows[i][j].is_zero()) {
                    Some(j) => self.tableau.pivot(i, j),
                    None => {
                        self.tableau.rows.remove(i);
                        self.tableau.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
        true
    }

    fn cost_vector(&self, objective: &[Rational]) -> Vec<Rational> {
        let mut cost = vec![Rational::zero(); self.tableau.ncols];
        for (c, sub) in objective.iter().zip(&self.subs) {
            match sub {
                Substitution::Shifted { col, .. } => cost[*col] += c,
                Substitution::Reflected { col, .. } => cost[*col] -= c,
                Substitution::Split { pos, neg } => {
                    cost[*pos] += c;
                    cost[*neg] -= c;
                }
            }
        }
        cost
    }

    fn recover(&self, lp: &LinearProgram) -> Vec<Rational> {
        let mut y = vec![Rational::zero(); self.tableau.ncols];
        for (row, &b) in self.tableau.rows.iter().zip(&self.tableau.basis) {
            y[b] = row.last().expect("rhs").clone();
        }
        (0..lp.num_vars)
            .map(|j| match &self.subs[j] {
                Substitution::Shifted { col, lower } => lower + &y[*col],
                Substitution::Reflected { col, upper } => upper - &y[*col],
                Substitution::Split { pos, neg } => &y[*pos] - &y[*neg],
            })
            .collect()
    }
}

struct Tableau {
    /// Each row has `ncols` coefficients followed by the rhs.
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    ncols: usize,
    /// Reduced-cost row `z_j - c_j`, then the objective value.
    objective: Vec<Rational>,
}

impl Tableau {
    fn objective_value(&self) -> &Rational {
        self.objective.last().expect("objective row")
    }

    /// Maximizes `cost` allowing only columns `< allowed` to enter. Returns
    /// `false` if unbounded.
    fn optimize(&mut self, cost: &[Rational], allowed: usize) -> bool {
        let mut obj: Vec<Rational> = cost.iter().map(|c| -c).collect();
        obj.push(Rational::zero());
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (o, v) in obj.iter_mut().zip(row) {
                if !v.is_zero() {
                    *o += cb * v;
                }
            }
        }
        self.objective = obj;

        loop {
            // Bland: lowest-index improving column enters.
            let Some(enter) = (0..allowed).find(|&j| self.objective[j].is_negative()) else {
                return true;
            };
            // Ratio test; ties broken by lowest basic variable index.
            let mut leave: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                let a = &row[enter];
                if !a.is_positive() {
                    continue;
                }
                let ratio = row.last().expect("rhs") / a;
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                None => return false,
                Some((i, _)) => self.pivot(i, enter),
            }
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        let pivot_row = self.rows[r].clone();
        let nonzero: Vec<usize> = (0..pivot_row.len()).filter(|&j| !pivot_row[j].is_zero()).collect();
        let eliminate = |row: &mut Vec<Rational>| {
            let f = row[c].clone();
            if f.is_zero() {
                return;
            }
            for &j in &nonzero {
                row[j] -= &f * &pivot_row[j];
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        if !self.objective.is_empty() {
            eliminate(&mut self.objective);
        }
        self.basis[r] = c;
    }
}
