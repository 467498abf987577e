//! Affine models fitted by empirical risk minimization.
//!
//! Squared loss is solved in closed form through a QR factorization. Absolute
//! and percentage losses are both weighted least-absolute-deviation problems:
//! dividing each residual by `|y_i|` is the same as giving instance `i` the
//! fixed weight `1 / |y_i|`, so one LP encoding serves both.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::loss::{weighted_mae, LossKind};
use crate::lp::{self, LpStatus, StandardFormLp};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    pub coefficients: Vec<f64>,
    pub intercept: f64,
    #[serde(rename = "loss")]
    pub loss_trained_on: LossKind,
}

impl LinearModel {
    pub fn predict_row(&self, x: &[f64]) -> f64 {
        self.intercept
            + self
                .coefficients
                .iter()
                .zip(x)
                .map(|(b, v)| b * v)
                .sum::<f64>()
    }
}

/// Row-wise `intercept + coefficients . x`.
pub fn predict(model: &LinearModel, features: &DMatrix<f64>) -> Result<Vec<f64>> {
    if features.ncols() != model.coefficients.len() {
        return Err(Error::DimensionMismatch {
            expected: model.coefficients.len(),
            found: features.ncols(),
        });
    }
    Ok((0..features.nrows())
        .map(|i| {
            let row: Vec<f64> = features.row(i).iter().copied().collect();
            model.predict_row(&row)
        })
        .collect())
}

/// Strictly positive, finite per-instance weights.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceWeights(Vec<f64>);

impl InstanceWeights {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if let Some((index, &value)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !(w.is_finite() && **w > 0.0))
        {
            return Err(Error::InvalidWeight { index, value });
        }
        Ok(Self(weights))
    }

    pub fn unit(n: usize) -> Self {
        Self(vec![1.0; n])
    }

    /// `w_i = 1 / |y_i|`; fails listing every row (1-based) whose target is zero.
    pub fn inverse_abs_target(target: &[f64]) -> Result<Self> {
        let rows = zero_target_rows(target);
        if !rows.is_empty() {
            return Err(Error::ZeroTargets { rows });
        }
        Ok(Self(target.iter().map(|y| 1.0 / y.abs()).collect()))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

fn zero_target_rows(target: &[f64]) -> Vec<usize> {
    target
        .iter()
        .enumerate()
        .filter(|(_, y)| **y == 0.0)
        .map(|(i, _)| i + 1)
        .collect()
}

/// Least squares with intercept.
///
/// Feature columns that are identically zero cannot influence predictions and
/// get a zero coefficient; any other collinearity is reported as rank
/// deficiency.
pub fn fit_ols(ds: &Dataset) -> Result<LinearModel> {
    let x = ds.features();
    let y = ds.target();
    let n = ds.n_rows();
    let active: Vec<usize> = (0..ds.n_features())
        .filter(|&j| x.column(j).iter().any(|v| *v != 0.0))
        .collect();
    let k = active.len() + 1;
    if n < ds.n_features() + 1 {
        return Err(Error::TooFewRows {
            needed: ds.n_features() + 1,
            found: n,
        });
    }

    let design = DMatrix::from_fn(
        n,
        k,
        |i, j| if j == 0 { 1.0 } else { x[(i, active[j - 1])] },
    );
    let qr = design.clone().qr();
    let r = qr.r();
    for j in 0..k {
        let col_norm = design.column(j).norm();
        if r[(j, j)].abs() <= 1e-10 * col_norm {
            return Err(Error::RankDeficient);
        }
    }
    let qty = qr.q().transpose() * y;
    let beta: DVector<f64> = r.solve_upper_triangular(&qty).ok_or(Error::RankDeficient)?;

    let mut coefficients = vec![0.0; ds.n_features()];
    for (slot, &j) in active.iter().enumerate() {
        coefficients[j] = beta[slot + 1];
    }
    Ok(LinearModel {
        coefficients,
        intercept: beta[0],
        loss_trained_on: LossKind::Mse,
    })
}

/// Builds the LP for `min sum_i w_i |y_i - (b + x_i . beta)|`.
///
/// Column layout: `[b+, b-, beta_1+, beta_1-, ..., beta_d+, beta_d-, u_1..u_N, v_1..v_N]`,
/// with one equality row per instance `b + x_i . beta + u_i - v_i = y_i`.
pub fn weighted_lad_program(ds: &Dataset, weights: &InstanceWeights) -> Result<StandardFormLp> {
    let n = ds.n_rows();
    let d = ds.n_features();
    if weights.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: weights.len(),
        });
    }
    let p = 2 * (d + 1);
    let width = p + 2 * n;
    let mut objective = vec![0.0; width];
    for (i, &w) in weights.as_slice().iter().enumerate() {
        objective[p + i] = w;
        objective[p + n + i] = w;
    }
    let x = ds.features();
    let mut matrix = vec![0.0; n * width];
    for i in 0..n {
        let row = &mut matrix[i * width..(i + 1) * width];
        row[0] = 1.0;
        row[1] = -1.0;
        for j in 0..d {
            row[2 + 2 * j] = x[(i, j)];
            row[3 + 2 * j] = -x[(i, j)];
        }
        row[p + i] = 1.0;
        row[p + n + i] = -1.0;
    }
    StandardFormLp::from_parts(objective, matrix, ds.target().as_slice().to_vec())
}

/// Minimizes `(1/N) * sum_i w_i |g(x_i) - y_i|` over affine `g`.
///
/// The optimum is generally not unique; only the objective value is
/// canonical.
pub fn fit_weighted_lad(ds: &Dataset, weights: &InstanceWeights) -> Result<LinearModel> {
    let program = weighted_lad_program(ds, weights)?;
    let solution = lp::solve(&program)?;
    if solution.status != LpStatus::Optimal {
        return Err(Error::Solver(solution.status));
    }
    let z = &solution.x;
    let coefficients = (0..ds.n_features())
        .map(|j| z[2 + 2 * j] - z[3 + 2 * j])
        .collect();
    Ok(LinearModel {
        coefficients,
        intercept: z[0] - z[1],
        loss_trained_on: LossKind::Mae,
    })
}

/// Mean weighted absolute residual of `model` on `ds`.
pub fn weighted_lad_objective(
    model: &LinearModel,
    ds: &Dataset,
    weights: &InstanceWeights,
) -> Result<f64> {
    let predictions = predict(model, ds.features())?;
    weighted_mae(&predictions, ds.target().as_slice(), weights.as_slice())
}

/// Empirical risk minimizer over affine models for `kind`.
pub fn fit(ds: &Dataset, kind: LossKind) -> Result<LinearModel> {
    match kind {
        LossKind::Mse => fit_ols(ds),
        LossKind::Mae => fit_weighted_lad(ds, &InstanceWeights::unit(ds.n_rows())),
        LossKind::Mape => {
            let weights = InstanceWeights::inverse_abs_target(ds.target().as_slice())?;
            let mut model = fit_weighted_lad(ds, &weights)?;
            model.loss_trained_on = LossKind::Mape;
            Ok(model)
        }
    }
}
