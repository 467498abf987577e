//! Cross-loss comparison: fit one model per loss and evaluate each model under
//! every normalized risk.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::data::{summarize, Dataset, DatasetSummary, MedianConvention, StdConvention};
use crate::error::Result;
use crate::loss::{risk_report, round_half_even, LossKind, RiskReport};
use crate::regress::{fit, predict, LinearModel};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub loss: LossKind,
    pub model: LinearModel,
    pub report: RiskReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchConventions {
    pub std: StdConvention,
    pub median: MedianConvention,
    /// Denominator of the mean squared error inside the root.
    pub mse_denominator: String,
    /// Rounding applied to printed values.
    pub rounding: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchResult {
    /// One row per training loss, ordered MSE, MAE, MAPE.
    pub rows: Vec<BenchRow>,
    pub conventions: BenchConventions,
    pub summary: DatasetSummary,
}

/// Fits all three losses (concurrently) and evaluates the 3x3 risk matrix.
pub fn run_bench(ds: &Dataset) -> Result<BenchResult> {
    let summary = summarize(ds)?;
    let models: Vec<Result<LinearModel>> = std::thread::scope(|scope| {
        let handles: Vec<_> = LossKind::ALL
            .iter()
            .map(|&kind| scope.spawn(move || fit(ds, kind)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("fit thread panicked"))
            .collect()
    });

    let targets = ds.target().as_slice();
    let mut rows = Vec::with_capacity(3);
    for (kind, model) in LossKind::ALL.into_iter().zip(models) {
        let model = model?;
        let predictions = predict(&model, ds.features())?;
        let report = risk_report(&predictions, &summary, targets)?;
        rows.push(BenchRow {
            loss: kind,
            model,
            report,
        });
    }
    Ok(BenchResult {
        rows,
        conventions: BenchConventions {
            std: summary.std_convention,
            median: summary.median_convention,
            mse_denominator: "n".into(),
            rounding: "half-to-even, 3 decimals".into(),
        },
        summary,
    })
}

impl BenchResult {
    /// Value at (training loss `row`, evaluation loss `col`).
    pub fn entry(&self, row: LossKind, col: LossKind) -> f64 {
        self.rows
            .iter()
            .find(|r| r.loss == row)
            .map(|r| r.report.get(col))
            .expect("bench always holds all three rows")
    }

    /// Training loss achieving the smallest value in column `col`; ties go to
    /// the earliest row.
    pub fn column_argmin(&self, col: LossKind) -> LossKind {
        self.rows
            .iter()
            .min_by(|a, b| a.report.get(col).total_cmp(&b.report.get(col)))
            .map(|r| r.loss)
            .unwrap()
    }

    /// Each model is the (weak) column minimum for its own loss.
    pub fn diagonal_dominance(&self) -> bool {
        self.diagonal_dominance_within(0.0)
    }

    /// Diagonal dominance allowing each diagonal entry to exceed the column
    /// minimum by `tol`.
    pub fn diagonal_dominance_within(&self, tol: f64) -> bool {
        LossKind::ALL.iter().all(|&col| {
            let own = self.entry(col, col);
            self.rows.iter().all(|r| own <= r.report.get(col) + tol)
        })
    }

    pub fn rounded(&self) -> [[f64; 3]; 3] {
        let mut out = [[0.0; 3]; 3];
        for (i, row) in LossKind::ALL.iter().enumerate() {
            for (j, col) in LossKind::ALL.iter().enumerate() {
                out[i][j] = round_half_even(self.entry(*row, *col), 3);
            }
        }
        out
    }

    /// Plain-text table with three decimals; column minima carry a `*`.
    pub fn render_table(&self) -> String {
        let rounded = self.rounded();
        let mut s = String::new();
        writeln!(
            s,
            "{:<14}{:>10}{:>10}{:>10}",
            "Loss function", "NRMSE", "NMAE", "MAPE"
        )
        .unwrap();
        for (i, row) in LossKind::ALL.iter().enumerate() {
            write!(s, "{:<14}", row.to_string()).unwrap();
            for (j, col) in LossKind::ALL.iter().enumerate() {
                let mark = if self.column_argmin(*col) == *row {
                    "*"
                } else {
                    " "
                };
                write!(s, "{:>9.3}{}", rounded[i][j], mark).unwrap();
            }
            s.push('\n');
        }
        s
    }
}
