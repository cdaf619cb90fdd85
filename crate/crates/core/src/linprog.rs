//! Small dense linear-program solver.
//!
//! Problems are stated as `maximize c·x subject to A x <= b` with free
//! variables. Every containment computation in the crate has few variables
//! and many constraints, so the solver works on the dual
//! `minimize b·y subject to Aᵀ y = c, y >= 0`, which has one tableau row per
//! variable. The primal point is recovered from the simplex multipliers and
//! polished on the active set. If the recovered point fails the feasibility
//! check the primal is solved directly in standard form.
//!
//! Both routes run the same two-phase tableau simplex (Dantzig pricing with
//! a fall back to Bland's rule on degenerate stalls), so the pivot sequence
//! is a deterministic function of the input order.

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

/// Feasibility tolerance shared by every caller: a constraint counts as
/// satisfied when `a·x <= b + FEAS_TOL * (1 + |b|)`.
pub const FEAS_TOL: f64 = 1e-9;

const PIVOT_TOL: f64 = 1e-11;
const COST_TOL: f64 = 1e-11;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LpError {
    #[error("malformed linear program: {0}")]
    Malformed(String),
    #[error("simplex did not converge within {0} pivots")]
    NumericalFailure(usize),
}

/// One inequality `a·x <= b`.
#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub a: Vec<f64>,
    pub b: f64,
}

impl Constraint {
    pub fn new(a: Vec<f64>, b: f64) -> Self {
        Self { a, b }
    }
}

/// `maximize objective·x subject to constraints`, with `x` unrestricted in sign.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
    pub n_vars: usize,
}

impl LinearProgram {
    pub fn new(objective: Vec<f64>) -> Self {
        let n_vars = objective.len();
        Self {
            objective,
            constraints: Vec::new(),
            n_vars,
        }
    }

    pub fn push(&mut self, a: Vec<f64>, b: f64) {
        self.constraints.push(Constraint::new(a, b));
    }

    fn validate(&self) -> Result<(), LpError> {
        if self.n_vars == 0 {
            return Err(LpError::Malformed("n_vars must be at least 1".into()));
        }
        if self.objective.len() != self.n_vars {
            return Err(LpError::Malformed(format!(
                "objective has {} entries, expected {}",
                self.objective.len(),
                self.n_vars
            )));
        }
        if !self.objective.iter().all(|v| v.is_finite()) {
            return Err(LpError::Malformed("non-finite objective".into()));
        }
        for (i, c) in self.constraints.iter().enumerate() {
            if c.a.len() != self.n_vars {
                return Err(LpError::Malformed(format!(
                    "constraint {i} has {} coefficients, expected {}",
                    c.a.len(),
                    self.n_vars
                )));
            }
            if !c.b.is_finite() || !c.a.iter().all(|v| v.is_finite()) {
                return Err(LpError::Malformed(format!("constraint {i} is not finite")));
            }
        }
        Ok(())
    }

    /// Largest scaled violation `max(a·x - b) / (1 + |b|)` over all constraints.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        self.constraints
            .iter()
            .map(|c| (dot(&c.a, x) - c.b) / (1.0 + c.b.abs()))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn is_feasible(&self, x: &[f64]) -> bool {
        self.constraints.is_empty() || self.max_violation(x) <= FEAS_TOL
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub x: Option<Vec<f64>>,
    pub value: Option<f64>,
}

impl LpSolution {
    fn optimal(lp: &LinearProgram, x: Vec<f64>) -> Self {
        let value = dot(&lp.objective, &x);
        Self {
            status: LpStatus::Optimal,
            x: Some(x),
            value: Some(value),
        }
    }

    fn status_only(status: LpStatus) -> Self {
        Self {
            status,
            x: None,
            value: None,
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Solves `lp`. The result is a deterministic function of `lp`.
pub fn solve(lp: &LinearProgram) -> Result<LpSolution, LpError> {
    lp.validate()?;
    if lp.constraints.is_empty() {
        return Ok(if lp.objective.iter().all(|&c| c == 0.0) {
            LpSolution::optimal(lp, vec![0.0; lp.n_vars])
        } else {
            LpSolution::status_only(LpStatus::Unbounded)
        });
    }
    match solve_via_dual(lp)? {
        Some(sol) => Ok(sol),
        None => solve_primal(lp),
    }
}

/// Outcome of the standard-form engine.
enum StdOutcome {
    Optimal(Tableau),
    Infeasible,
    Unbounded,
}

/// Dense tableau for `minimize c·y, A y = b, y >= 0` with `b >= 0` after
/// row sign flips. Columns: `n` structural, `m` artificial, then the rhs.
struct Tableau {
    rows: Vec<Vec<f64>>,
    basis: Vec<usize>,
    n: usize,
    m: usize,
    /// `-1` where the original row was negated to make its rhs nonnegative.
    signs: Vec<f64>,
}

impl Tableau {
    fn rhs(&self, i: usize) -> f64 {
        self.rows[i][self.n + self.m]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let width = self.n + self.m + 1;
        let p = self.rows[r][c];
        for v in self.rows[r].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c];
            if f != 0.0 {
                for j in 0..width {
                    row[j] -= f * pivot_row[j];
                }
                row[c] = 0.0;
            }
        }
        self.basis[r] = c;
    }

    /// Reduced costs `c_j - c_B B^{-1} A_j` for the columns below `limit`.
    fn reduced_costs(&self, cost: &[f64], limit: usize) -> Vec<f64> {
        let mut d: Vec<f64> = cost[..limit].to_vec();
        for (i, row) in self.rows.iter().enumerate() {
            let cb = cost[self.basis[i]];
            if cb != 0.0 {
                for j in 0..limit {
                    d[j] -= cb * row[j];
                }
            }
        }
        d
    }

    /// Runs the simplex minimizing `cost` over columns `< enter_limit`.
    /// Entering columns follow Dantzig's rule until a run of degenerate
    /// pivots suggests cycling, then Bland's rule for the rest of the run.
    /// Returns `Ok(false)` on unboundedness.
    fn run(&mut self, cost: &[f64], enter_limit: usize, cap: usize) -> Result<bool, LpError> {
        let mut degenerate_run = 0usize;
        let mut bland = false;
        for _ in 0..cap {
            let d = self.reduced_costs(cost, enter_limit);
            let enter = if bland {
                (0..enter_limit).find(|&j| d[j] < -COST_TOL)
            } else {
                (0..enter_limit)
                    .filter(|&j| d[j] < -COST_TOL)
                    .min_by(|&a, &b| d[a].partial_cmp(&d[b]).unwrap_or(std::cmp::Ordering::Equal))
            };
            let Some(enter) = enter else {
                return Ok(true);
            };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.rows.len() {
                let a = self.rows[i][enter];
                if a > PIVOT_TOL {
                    let ratio = self.rhs(i) / a;
                    leave = match leave {
                        None => Some((i, ratio)),
                        Some((li, lr)) => {
                            if ratio < lr - 1e-14 * (1.0 + lr.abs())
                                || (ratio <= lr + 1e-14 * (1.0 + lr.abs())
                                    && self.basis[i] < self.basis[li])
                            {
                                Some((i, ratio))
                            } else {
                                Some((li, lr))
                            }
                        }
                    };
                }
            }
            match leave {
                None => return Ok(false),
                Some((r, ratio)) => {
                    if ratio.abs() <= 1e-14 {
                        degenerate_run += 1;
                        if degenerate_run > 30 {
                            bland = true;
                        }
                    } else {
                        degenerate_run = 0;
                    }
                    self.pivot(r, enter);
                }
            }
        }
        Err(LpError::NumericalFailure(cap))
    }

    /// Simplex multipliers `c_B B^{-1}` expressed for the unflipped rows.
    fn multipliers(&self, cost: &[f64]) -> Vec<f64> {
        let mut pi = vec![0.0; self.m];
        for (i, row) in self.rows.iter().enumerate() {
            let cb = cost[self.basis[i]];
            if cb != 0.0 {
                for (k, p) in pi.iter_mut().enumerate() {
                    *p += cb * row[self.n + k];
                }
            }
        }
        for (p, s) in pi.iter_mut().zip(&self.signs) {
            *p *= s;
        }
        pi
    }

    fn solution(&self) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.n {
                y[b] = self.rhs(i);
            }
        }
        y
    }
}

/// Two-phase simplex for `minimize cost·y, a y = b, y >= 0`.
/// `a` is row-major `m x n`.
fn standard_form(a: &[Vec<f64>], b: &[f64], cost: &[f64]) -> Result<StdOutcome, LpError> {
    let m = a.len();
    let n = cost.len();
    let mut rows = Vec::with_capacity(m);
    let mut signs = Vec::with_capacity(m);
    for (i, row) in a.iter().enumerate() {
        let s = if b[i] < 0.0 { -1.0 } else { 1.0 };
        let mut r = vec![0.0; n + m + 1];
        for j in 0..n {
            r[j] = s * row[j];
        }
        r[n + i] = 1.0;
        r[n + m] = s * b[i];
        rows.push(r);
        signs.push(s);
    }
    let mut t = Tableau {
        rows,
        basis: (n..n + m).collect(),
        n,
        m,
        signs,
    };
    let cap = 10 * (n + m) + 50;

    // Phase 1: drive the artificials to zero.
    let mut phase1 = vec![0.0; n + m];
    for c in phase1[n..].iter_mut() {
        *c = 1.0;
    }
    t.run(&phase1, n + m, cap)?;
    let infeas: f64 = t
        .basis
        .iter()
        .enumerate()
        .filter(|(_, &bv)| bv >= n)
        .map(|(i, _)| t.rhs(i))
        .sum();
    let bscale = 1.0 + b.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    if infeas > FEAS_TOL * bscale {
        return Ok(StdOutcome::Infeasible);
    }
    // Pivot remaining (zero-level) artificials out where possible.
    for i in 0..m {
        if t.basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| t.rows[i][j].abs() > 1e-9) {
                t.pivot(i, j);
            }
        }
    }

    // Phase 2 over structural columns only.
    let mut phase2 = vec![0.0; n + m];
    phase2[..n].copy_from_slice(cost);
    if !t.run(&phase2, n, cap)? {
        return Ok(StdOutcome::Unbounded);
    }
    Ok(StdOutcome::Optimal(t))
}

/// Solves through the dual. Returns `None` when the recovered primal point
/// does not pass the feasibility check.
fn solve_via_dual(lp: &LinearProgram) -> Result<Option<LpSolution>, LpError> {
    let n = lp.n_vars;
    let m = lp.constraints.len();
    // Dual: minimize b·y s.t. Aᵀ y = c, y >= 0. Rows = primal variables.
    let at: Vec<Vec<f64>> = (0..n)
        .map(|j| lp.constraints.iter().map(|c| c.a[j]).collect())
        .collect();
    let bvec: Vec<f64> = lp.constraints.iter().map(|c| c.b).collect();
    match standard_form(&at, &lp.objective, &bvec)? {
        StdOutcome::Optimal(t) => {
            let mut cost = vec![0.0; m + n];
            cost[..m].copy_from_slice(&bvec);
            let pi = t.multipliers(&cost);
            let candidates = [polish(lp, &t), Some(pi)];
            for x in candidates.into_iter().flatten() {
                if lp.is_feasible(&x) {
                    return Ok(Some(LpSolution::optimal(lp, x)));
                }
            }
            Ok(None)
        }
        StdOutcome::Unbounded => Ok(Some(LpSolution::status_only(LpStatus::Infeasible))),
        StdOutcome::Infeasible => {
            // Dual infeasible: the primal is unbounded or infeasible. The
            // primal is feasible iff min b·y over {Aᵀy = 0, y >= 0} is bounded.
            let zero = vec![0.0; n];
            match standard_form(&at, &zero, &bvec)? {
                StdOutcome::Unbounded => {
                    Ok(Some(LpSolution::status_only(LpStatus::Infeasible)))
                }
                _ => Ok(Some(LpSolution::status_only(LpStatus::Unbounded))),
            }
        }
    }
}

/// Re-solves the active constraints of the optimal dual basis exactly.
fn polish(lp: &LinearProgram, t: &Tableau) -> Option<Vec<f64>> {
    let n = lp.n_vars;
    let active: Vec<usize> = t.basis.iter().copied().filter(|&j| j < t.n).collect();
    if active.len() != n {
        return None;
    }
    let a = DMatrix::from_fn(n, n, |i, j| lp.constraints[active[i]].a[j]);
    let b = DVector::from_fn(n, |i, _| lp.constraints[active[i]].b);
    let x = a.lu().solve(&b)?;
    if x.iter().all(|v| v.is_finite()) {
        Some(x.iter().copied().collect())
    } else {
        None
    }
}

/// Direct primal route: `x = x⁺ - x⁻`, slack `s`, `minimize -c·x`.
fn solve_primal(lp: &LinearProgram) -> Result<LpSolution, LpError> {
    let n = lp.n_vars;
    let m = lp.constraints.len();
    let cols = 2 * n + m;
    let a: Vec<Vec<f64>> = lp
        .constraints
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let mut r = vec![0.0; cols];
            for j in 0..n {
                r[j] = c.a[j];
                r[n + j] = -c.a[j];
            }
            r[2 * n + i] = 1.0;
            r
        })
        .collect();
    let b: Vec<f64> = lp.constraints.iter().map(|c| c.b).collect();
    let mut cost = vec![0.0; cols];
    for j in 0..n {
        cost[j] = -lp.objective[j];
        cost[n + j] = lp.objective[j];
    }
    match standard_form(&a, &b, &cost)? {
        StdOutcome::Optimal(t) => {
            let y = t.solution();
            let x: Vec<f64> = (0..n).map(|j| y[j] - y[n + j]).collect();
            if lp.is_feasible(&x) {
                Ok(LpSolution::optimal(lp, x))
            } else {
                Err(LpError::NumericalFailure(0))
            }
        }
        StdOutcome::Infeasible => Ok(LpSolution::status_only(LpStatus::Infeasible)),
        StdOutcome::Unbounded => Ok(LpSolution::status_only(LpStatus::Unbounded)),
    }
}
