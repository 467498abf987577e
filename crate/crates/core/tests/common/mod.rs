//! Test-only generators and brute-force oracles shared by the integration
//! suites. Nothing here calls into the solver paths it is used to check.
#![allow(dead_code)]

use mape_regression::lp::StandardFormLp;
use rand::rngs::StdRng;
use rand::Rng;

/// Random LP with `m <= 5`, `n <= 10` and integer data in `[-5, 5]`. Half of
/// the problems get `b = A x0` for a nonnegative integer `x0`, so they are
/// feasible by construction; `x0` is returned for those.
pub fn random_lp(rng: &mut StdRng) -> (StandardFormLp, Option<Vec<f64>>) {
    let m = rng.random_range(1..=5);
    let n = rng.random_range(1..=10);
    let int = |rng: &mut StdRng| rng.random_range(-5i32..=5) as f64;
    let c: Vec<f64> = (0..n).map(|_| int(rng)).collect();
    let rows: Vec<Vec<f64>> = (0..m).map(|_| (0..n).map(|_| int(rng)).collect()).collect();
    let (b, x0) = if rng.random_bool(0.5) {
        let x0: Vec<f64> = (0..n).map(|_| rng.random_range(0..=3) as f64).collect();
        let b = rows
            .iter()
            .map(|r| r.iter().zip(&x0).map(|(a, x)| a * x).sum())
            .collect();
        (b, Some(x0))
    } else {
        ((0..m).map(|_| int(rng)).collect(), None)
    };
    (StandardFormLp::new(c, rows, b).unwrap(), x0)
}

/// `(1/N) sum w_i |y_i - (a + b x_i)|`.
pub fn lad_objective(xs: &[f64], ys: &[f64], ws: &[f64], intercept: f64, slope: f64) -> f64 {
    let total: f64 = xs
        .iter()
        .zip(ys)
        .zip(ws)
        .map(|((x, y), w)| w * (y - intercept - slope * x).abs())
        .sum();
    total / ys.len() as f64
}

/// Brute-force weighted LAD for one feature: some optimal line passes through
/// two data points with distinct `x`; when every `x` is equal the slope is
/// irrelevant and the optimum is a weighted median, i.e. one of the `y_i`.
pub fn lad_oracle(xs: &[f64], ys: &[f64], ws: &[f64]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..xs.len() {
        best = best.min(lad_objective(xs, ys, ws, ys[i], 0.0));
        for j in i + 1..xs.len() {
            if xs[i] != xs[j] {
                let slope = (ys[j] - ys[i]) / (xs[j] - xs[i]);
                let intercept = ys[i] - slope * xs[i];
                best = best.min(lad_objective(xs, ys, ws, intercept, slope));
            }
        }
    }
    best
}

/// Random one-feature dataset with `n <= 8` and targets in `[0.5, 10]`.
pub fn random_small_dataset(rng: &mut StdRng) -> (Vec<f64>, Vec<f64>) {
    let n = rng.random_range(2..=8);
    let xs = (0..n).map(|_| rng.random_range(-5.0..5.0)).collect();
    let ys = (0..n).map(|_| rng.random_range(0.5..10.0)).collect();
    (xs, ys)
}

pub fn cars_path() -> &'static str {
    concat!(env!("CARGO_MANIFEST_DIR"), "/data/cars.csv")
}
