//! Dense linear programming in standard form:
//!
//! ```text
//! minimize  c . x   subject to  A x = b,  x >= 0
//! ```
//!
//! [`solve`] runs a two-phase primal simplex on an explicit tableau. Pricing is
//! Dantzig's most-negative reduced cost until too many degenerate pivots have
//! been taken, after which Bland's smallest-index rule guarantees termination.
//! [`enumerate_vertices_oracle`] is an exhaustive reference used by tests.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A linear program `min c.x s.t. Ax = b, x >= 0` with a dense row-major `A`.
#[derive(Debug, Clone, PartialEq)]
pub struct StandardFormLp {
    objective: Vec<f64>,
    matrix: Vec<f64>,
    rhs: Vec<f64>,
}

impl StandardFormLp {
    /// Builds a problem from constraint rows. Every row must have one entry
    /// per objective coefficient and every value must be finite.
    pub fn new(objective: Vec<f64>, rows: Vec<Vec<f64>>, rhs: Vec<f64>) -> Result<Self> {
        let n = objective.len();
        if rows.len() != rhs.len() {
            return Err(Error::DimensionMismatch {
                expected: rows.len(),
                found: rhs.len(),
            });
        }
        if let Some(row) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: row.len(),
            });
        }
        let matrix: Vec<f64> = rows.into_iter().flatten().collect();
        Self::from_parts(objective, matrix, rhs)
    }

    /// Builds a problem from a row-major `rhs.len() x objective.len()` matrix.
    pub fn from_parts(objective: Vec<f64>, matrix: Vec<f64>, rhs: Vec<f64>) -> Result<Self> {
        if objective.is_empty() {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: 0,
            });
        }
        if matrix.len() != objective.len() * rhs.len() {
            return Err(Error::DimensionMismatch {
                expected: objective.len() * rhs.len(),
                found: matrix.len(),
            });
        }
        if objective
            .iter()
            .chain(&matrix)
            .chain(&rhs)
            .any(|v| !v.is_finite())
        {
            return Err(Error::InvalidProblem("non-finite coefficient".into()));
        }
        Ok(Self {
            objective,
            matrix,
            rhs,
        })
    }

    pub fn n_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn n_constraints(&self) -> usize {
        self.rhs.len()
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.n_vars();
        &self.matrix[i * n..(i + 1) * n]
    }

    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    /// `max_i |(Ax - b)_i|`.
    pub fn residual_inf_norm(&self, x: &[f64]) -> f64 {
        (0..self.n_constraints())
            .map(|i| {
                let ax: f64 = self.row(i).iter().zip(x).map(|(a, v)| a * v).sum();
                (ax - self.rhs[i]).abs()
            })
            .fold(0.0, f64::max)
    }

    /// Row-major copy of `[A | b]` with rows negated where `b_i < 0`.
    fn normalized_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n_constraints())
            .map(|i| {
                let sign = if self.rhs[i] < 0.0 { -1.0 } else { 1.0 };
                let mut row: Vec<f64> = self.row(i).iter().map(|a| sign * a).collect();
                row.push(sign * self.rhs[i]);
                row
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Primal point; meaningful only when `status` is `Optimal`.
    pub x: Vec<f64>,
    /// Meaningful only when `status` is `Optimal`.
    pub objective_value: f64,
    pub iterations: usize,
}

impl LpSolution {
    fn without_point(status: LpStatus, n: usize, iterations: usize) -> Self {
        Self {
            status,
            x: vec![0.0; n],
            objective_value: f64::NAN,
            iterations,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexOptions {
    /// Smallest magnitude accepted as a pivot element.
    pub pivot_tolerance: f64,
    /// Feasibility and optimality tolerance.
    pub tolerance: f64,
    /// Degenerate pivots allowed under Dantzig pricing before switching to
    /// Bland's rule; `None` means `2 * (m + n)`.
    pub bland_after: Option<usize>,
    /// Hard cap on pivots per phase; `None` means `max(10_000, 100 * (m + n))`.
    pub max_iterations: Option<usize>,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self {
            pivot_tolerance: 1e-10,
            tolerance: 1e-9,
            bland_after: None,
            max_iterations: None,
        }
    }
}

pub fn solve(lp: &StandardFormLp) -> Result<LpSolution> {
    solve_with(lp, &SimplexOptions::default())
}

pub fn solve_with(lp: &StandardFormLp, options: &SimplexOptions) -> Result<LpSolution> {
    let mut tableau = Tableau::build(lp, options);
    let n = lp.n_vars();

    if tableau.n_artificial > 0 {
        let mut phase_one_cost = vec![0.0; tableau.n_cols];
        for c in &mut phase_one_cost[n..] {
            *c = 1.0;
        }
        tableau.set_objective(&phase_one_cost);
        match tableau.run(options, true)? {
            PhaseOutcome::Optimal => {}
            // The phase-one objective is bounded below by zero.
            PhaseOutcome::Unbounded => return Err(Error::Solver(LpStatus::Unbounded)),
        }
        let b_norm = lp.rhs().iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if tableau.objective_value() > options.tolerance * (1.0 + b_norm) {
            return Ok(LpSolution::without_point(
                LpStatus::Infeasible,
                n,
                tableau.iterations,
            ));
        }
        tableau.drive_out_artificials(options);
    }

    let mut cost = lp.objective().to_vec();
    cost.resize(tableau.n_cols, 0.0);
    tableau.set_objective(&cost);
    match tableau.run(options, false)? {
        PhaseOutcome::Unbounded => Ok(LpSolution::without_point(
            LpStatus::Unbounded,
            n,
            tableau.iterations,
        )),
        PhaseOutcome::Optimal => {
            let x = tableau.primal_point(lp);
            Ok(LpSolution {
                status: LpStatus::Optimal,
                objective_value: lp.objective_value(&x),
                x,
                iterations: tableau.iterations,
            })
        }
    }
}

enum PhaseOutcome {
    Optimal,
    Unbounded,
}

struct Tableau {
    /// Constraint rows, each `n_cols + 1` wide with the right-hand side last.
    rows: Vec<Vec<f64>>,
    /// Reduced costs; the last entry is minus the current objective value.
    costs: Vec<f64>,
    basis: Vec<usize>,
    /// Original rows the tableau rows stem from (redundant rows get dropped).
    origin: Vec<usize>,
    n_orig: usize,
    n_artificial: usize,
    n_cols: usize,
    iterations: usize,
}

impl Tableau {
    /// Normalizes to `b >= 0`, reuses columns that already look like a
    /// positive multiple of a unit vector as starting basis, and adds one
    /// artificial column for every row left uncovered.
    fn build(lp: &StandardFormLp, options: &SimplexOptions) -> Self {
        let m = lp.n_constraints();
        let n = lp.n_vars();
        let mut rows = lp.normalized_rows();

        let mut basis: Vec<Option<usize>> = vec![None; m];
        for j in 0..n {
            let mut hit = None;
            let mut count = 0;
            for (i, row) in rows.iter().enumerate() {
                if row[j].abs() > options.pivot_tolerance {
                    count += 1;
                    hit = Some(i);
                } else if row[j] != 0.0 {
                    count += 2;
                }
            }
            if count == 1 {
                let i = hit.unwrap();
                if rows[i][j] > 0.0 && basis[i].is_none() {
                    basis[i] = Some(j);
                }
            }
        }

        let uncovered: Vec<usize> = (0..m).filter(|&i| basis[i].is_none()).collect();
        let n_artificial = uncovered.len();
        let n_cols = n + n_artificial;
        for row in &mut rows {
            let rhs = row.pop().unwrap();
            row.resize(n_cols, 0.0);
            row.push(rhs);
        }
        for (k, &i) in uncovered.iter().enumerate() {
            rows[i][n + k] = 1.0;
            basis[i] = Some(n + k);
        }
        let basis: Vec<usize> = basis.into_iter().map(Option::unwrap).collect();
        for (row, &j) in rows.iter_mut().zip(&basis) {
            let scale = row[j];
            if scale != 1.0 {
                row.iter_mut().for_each(|v| *v /= scale);
                row[j] = 1.0;
            }
        }

        Self {
            rows,
            costs: vec![0.0; n_cols + 1],
            basis,
            origin: (0..m).collect(),
            n_orig: n,
            n_artificial,
            n_cols,
            iterations: 0,
        }
    }

    fn rhs_col(&self) -> usize {
        self.n_cols
    }

    fn objective_value(&self) -> f64 {
        -self.costs[self.rhs_col()]
    }

    /// Prices out the basis for the cost vector `cost` (length `n_cols`).
    fn set_objective(&mut self, cost: &[f64]) {
        let rhs = self.rhs_col();
        self.costs = cost.to_vec();
        self.costs.push(0.0);
        for (row, &j) in self.rows.iter().zip(&self.basis) {
            let cb = cost[j];
            if cb != 0.0 {
                for (c, v) in self.costs.iter_mut().zip(row) {
                    *c -= cb * v;
                }
            }
        }
        for &j in &self.basis {
            self.costs[j] = 0.0;
        }
        debug_assert_eq!(self.costs.len(), rhs + 1);
    }

    fn run(&mut self, options: &SimplexOptions, phase_one: bool) -> Result<PhaseOutcome> {
        let m = self.rows.len();
        let enterable = if phase_one { self.n_cols } else { self.n_orig };
        let bland_after = options.bland_after.unwrap_or(2 * (m + self.n_cols));
        let max_iterations = options
            .max_iterations
            .unwrap_or_else(|| (100 * (m + self.n_cols)).max(10_000));
        let rhs = self.rhs_col();
        let mut degenerate = 0usize;
        let mut pivots = 0usize;

        loop {
            let bland = degenerate > bland_after;
            let entering = if bland {
                (0..enterable).find(|&j| self.costs[j] < -options.tolerance)
            } else {
                let mut best: Option<usize> = None;
                for j in 0..enterable {
                    if self.costs[j] < -options.tolerance
                        && best.is_none_or(|b| self.costs[j] < self.costs[b])
                    {
                        best = Some(j);
                    }
                }
                best
            };
            let Some(col) = entering else {
                return Ok(PhaseOutcome::Optimal);
            };

            let mut leaving: Option<(usize, f64)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                let a = row[col];
                if a <= options.pivot_tolerance {
                    continue;
                }
                let ratio = row[rhs].max(0.0) / a;
                leaving = match leaving {
                    None => Some((i, ratio)),
                    Some((k, best)) => {
                        let tie = (ratio - best).abs() <= 1e-12 * best.abs().max(1.0);
                        if (tie && self.basis[i] < self.basis[k]) || (!tie && ratio < best) {
                            Some((i, ratio))
                        } else {
                            Some((k, best))
                        }
                    }
                };
            }
            let Some((row, step)) = leaving else {
                return Ok(PhaseOutcome::Unbounded);
            };

            if step <= options.tolerance {
                degenerate += 1;
            }
            self.pivot(row, col);
            pivots += 1;
            self.iterations += 1;
            if pivots >= max_iterations {
                return Err(Error::IterationLimit(max_iterations));
            }
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c];
        let pivot_row: Vec<f64> = self.rows[r].iter().map(|v| v / p).collect();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c];
            if f != 0.0 {
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
                row[c] = 0.0;
            }
        }
        let f = self.costs[c];
        if f != 0.0 {
            for (v, pv) in self.costs.iter_mut().zip(&pivot_row) {
                *v -= f * pv;
            }
            self.costs[c] = 0.0;
        }
        self.rows[r] = pivot_row;
        self.rows[r][c] = 1.0;
        self.basis[r] = c;
    }

    /// After a successful phase one every artificial still basic sits at zero.
    /// Pivot each onto an original column, or drop its row when no original
    /// column has a usable entry (the constraint is redundant).
    fn drive_out_artificials(&mut self, options: &SimplexOptions) {
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] < self.n_orig {
                i += 1;
                continue;
            }
            let candidate = (0..self.n_orig)
                .filter(|&j| self.rows[i][j].abs() > options.pivot_tolerance)
                .max_by(|&a, &b| self.rows[i][a].abs().total_cmp(&self.rows[i][b].abs()));
            match candidate {
                Some(j) => {
                    self.pivot(i, j);
                    i += 1;
                }
                None => {
                    self.rows.remove(i);
                    self.basis.remove(i);
                    self.origin.remove(i);
                }
            }
        }
    }

    /// Reads the basic solution and refines it by solving `B x_B = b` against
    /// the original (normalized) rows, which removes accumulated pivot error.
    fn primal_point(&self, lp: &StandardFormLp) -> Vec<f64> {
        let rhs = self.rhs_col();
        let mut x = vec![0.0; self.n_orig];
        for (row, &j) in self.rows.iter().zip(&self.basis) {
            if j < self.n_orig {
                x[j] = row[rhs];
            }
        }
        if self.basis.iter().all(|&j| j < self.n_orig) {
            let normalized = lp.normalized_rows();
            let k = self.basis.len();
            let mut system: Vec<Vec<f64>> = self
                .origin
                .iter()
                .map(|&i| {
                    let mut r: Vec<f64> = self.basis.iter().map(|&j| normalized[i][j]).collect();
                    r.push(normalized[i][self.n_orig]);
                    r
                })
                .collect();
            if let Some(xb) = solve_square(&mut system, k, 1e-12) {
                let before = lp.residual_inf_norm(&x);
                let mut refined = x.clone();
                for (&j, v) in self.basis.iter().zip(xb) {
                    refined[j] = v;
                }
                if lp.residual_inf_norm(&refined) <= before {
                    return refined;
                }
            }
        }
        x
    }
}

/// Gaussian elimination with partial pivoting on an augmented `k x (k+1)`
/// system. Returns `None` when a pivot falls below `singular_tol` times the
/// largest entry of the matrix.
fn solve_square(aug: &mut [Vec<f64>], k: usize, singular_tol: f64) -> Option<Vec<f64>> {
    let scale = aug
        .iter()
        .flat_map(|r| r[..k].iter())
        .fold(0.0f64, |m, v| m.max(v.abs()));
    if k == 0 {
        return Some(Vec::new());
    }
    if scale == 0.0 {
        return None;
    }
    for col in 0..k {
        let pivot = (col..k).max_by(|&a, &b| aug[a][col].abs().total_cmp(&aug[b][col].abs()))?;
        if aug[pivot][col].abs() <= singular_tol * scale {
            return None;
        }
        aug.swap(col, pivot);
        let pivot_row = aug[col].clone();
        for row in &mut aug[col + 1..] {
            let f = row[col] / pivot_row[col];
            if f != 0.0 {
                for (a, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    *a -= f * p;
                }
            }
        }
    }
    let mut x = vec![0.0; k];
    for r in (0..k).rev() {
        let s: f64 = (r + 1..k).map(|c| aug[r][c] * x[c]).sum();
        x[r] = (aug[r][k] - s) / aug[r][r];
    }
    Some(x)
}

/// Exhaustive reference solver: enumerates every basic solution.
///
/// The constraint system is first reduced to a set of independent rows (or
/// reported infeasible when inconsistent). Every choice of `rank` columns is
/// then solved as a square system and the best nonnegative solution kept.
/// Unboundedness is decided separately by minimizing `c.d` over the
/// normalized recession cone `{d >= 0, Ad = 0, sum(d) = 1}`.
///
/// Limited to `n <= 20` and `m <= 10`.
pub fn enumerate_vertices_oracle(lp: &StandardFormLp) -> Result<LpSolution> {
    let (m, n) = (lp.n_constraints(), lp.n_vars());
    if n > 20 || m > 10 {
        return Err(Error::GuardExceeded(format!(
            "vertex enumeration needs n <= 20 and m <= 10, got n = {n}, m = {m}"
        )));
    }
    const TOL: f64 = 1e-9;

    let rows: Vec<Vec<f64>> = (0..m)
        .map(|i| {
            let mut r = lp.row(i).to_vec();
            r.push(lp.rhs()[i]);
            r
        })
        .collect();
    let Some(reduced) = independent_rows(rows, n, TOL) else {
        return Ok(LpSolution::without_point(LpStatus::Infeasible, n, 0));
    };

    let (best, examined) = best_vertex(&reduced, lp.objective(), n, TOL);
    let Some((x, value)) = best else {
        return Ok(LpSolution::without_point(LpStatus::Infeasible, n, examined));
    };

    // Recession cone: A d = 0, 1.d = 1, d >= 0.
    let mut cone: Vec<Vec<f64>> = (0..m)
        .map(|i| {
            let mut r = lp.row(i).to_vec();
            r.push(0.0);
            r
        })
        .collect();
    let mut ones = vec![1.0; n];
    ones.push(1.0);
    cone.push(ones);
    if let Some(cone) = independent_rows(cone, n, TOL) {
        let (ray, more) = best_vertex(&cone, lp.objective(), n, TOL);
        if let Some((_, slope)) = ray {
            if slope < -TOL {
                return Ok(LpSolution::without_point(
                    LpStatus::Unbounded,
                    n,
                    examined + more,
                ));
            }
        }
    }

    Ok(LpSolution {
        status: LpStatus::Optimal,
        x,
        objective_value: value,
        iterations: examined,
    })
}

/// Row-reduces the augmented rows `[A | b]`, returning an equivalent system of
/// independent rows, or `None` when the system is inconsistent.
fn independent_rows(mut rows: Vec<Vec<f64>>, n: usize, tol: f64) -> Option<Vec<Vec<f64>>> {
    let scale = rows
        .iter()
        .flat_map(|r| r.iter())
        .fold(1.0f64, |m, v| m.max(v.abs()));
    let mut rank = 0;
    for col in 0..n {
        if rank == rows.len() {
            break;
        }
        let pivot = (rank..rows.len())
            .max_by(|&a, &b| rows[a][col].abs().total_cmp(&rows[b][col].abs()))
            .unwrap();
        if rows[pivot][col].abs() <= tol * scale {
            continue;
        }
        rows.swap(rank, pivot);
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank {
                let f = row[col] / pivot_row[col];
                if f != 0.0 {
                    for (a, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                        *a -= f * p;
                    }
                }
            }
        }
        rank += 1;
    }
    if rows[rank..].iter().any(|r| r[n].abs() > tol * scale) {
        return None;
    }
    rows.truncate(rank);
    Some(rows)
}

/// Minimum of `c.x` over the basic feasible solutions of the independent
/// system `rows` (augmented, `n` variables). Returns the best point and the
/// number of column subsets examined.
fn best_vertex(
    rows: &[Vec<f64>],
    cost: &[f64],
    n: usize,
    tol: f64,
) -> (Option<(Vec<f64>, f64)>, usize) {
    let k = rows.len();
    let mut best: Option<(Vec<f64>, f64)> = None;
    let mut examined = 0;
    let mut subset: Vec<usize> = (0..k).collect();
    if k > n {
        return (None, 0);
    }
    loop {
        examined += 1;
        let mut system: Vec<Vec<f64>> = rows
            .iter()
            .map(|r| {
                let mut s: Vec<f64> = subset.iter().map(|&j| r[j]).collect();
                s.push(r[n]);
                s
            })
            .collect();
        if let Some(xb) = solve_square(&mut system, k, 1e-10) {
            if xb.iter().all(|&v| v >= -tol) {
                let mut x = vec![0.0; n];
                for (&j, v) in subset.iter().zip(xb) {
                    x[j] = v.max(0.0);
                }
                let value: f64 = cost.iter().zip(&x).map(|(c, v)| c * v).sum();
                if best.as_ref().is_none_or(|(_, b)| value < *b) {
                    best = Some((x, value));
                }
            }
        }
        if !next_combination(&mut subset, n) {
            break;
        }
    }
    (best, examined)
}

/// Advances `idx` to the next k-combination of `0..n` in lexicographic order.
pub(crate) fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
