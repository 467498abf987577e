//! CSV ingestion and the immutable [`Dataset`] every fitting routine consumes.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Design matrix plus target vector.
///
/// Invariants: at least one row and one feature column, every entry finite,
/// and the number of feature rows equals the target length.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    features: DMatrix<f64>,
    target: DVector<f64>,
    feature_names: Vec<String>,
    target_name: String,
}

impl Dataset {
    pub fn new(
        features: DMatrix<f64>,
        target: DVector<f64>,
        feature_names: Vec<String>,
        target_name: impl Into<String>,
    ) -> Result<Self> {
        if target.is_empty() {
            return Err(Error::EmptyDataset);
        }
        if features.ncols() == 0 {
            return Err(Error::NoFeatures);
        }
        if features.nrows() != target.len() {
            return Err(Error::DimensionMismatch {
                expected: target.len(),
                found: features.nrows(),
            });
        }
        if feature_names.len() != features.ncols() {
            return Err(Error::DimensionMismatch {
                expected: features.ncols(),
                found: feature_names.len(),
            });
        }
        let target_name = target_name.into();
        for (row, value) in target.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFinite {
                    row: row + 1,
                    column: target_name.clone(),
                });
            }
        }
        for row in 0..features.nrows() {
            for col in 0..features.ncols() {
                if !features[(row, col)].is_finite() {
                    return Err(Error::NonFinite {
                        row: row + 1,
                        column: feature_names[col].clone(),
                    });
                }
            }
        }
        Ok(Self {
            features,
            target,
            feature_names,
            target_name,
        })
    }

    /// Builds a dataset from row-major feature rows, naming features `x1..xd`
    /// and the target `y`.
    pub fn from_rows(rows: &[Vec<f64>], target: &[f64]) -> Result<Self> {
        if rows.is_empty() || target.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let d = rows[0].len();
        if let Some(bad) = rows.iter().find(|r| r.len() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: bad.len(),
            });
        }
        let features = DMatrix::from_fn(rows.len(), d, |i, j| rows[i][j]);
        let names = (1..=d).map(|j| format!("x{j}")).collect();
        Self::new(features, DVector::from_column_slice(target), names, "y")
    }

    pub fn features(&self) -> &DMatrix<f64> {
        &self.features
    }

    pub fn target(&self) -> &DVector<f64> {
        &self.target
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn target_name(&self) -> &str {
        &self.target_name
    }

    pub fn n_rows(&self) -> usize {
        self.target.len()
    }

    pub fn n_features(&self) -> usize {
        self.features.ncols()
    }

    /// Writes the dataset back as CSV, features first and the target last.
    ///
    /// Values are printed with the shortest representation that parses back
    /// to the same `f64`, so a reload reproduces the matrices bit for bit.
    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let io_err = |source| Error::Io {
            path: path.to_path_buf(),
            source,
        };
        let mut out = std::io::BufWriter::new(File::create(path).map_err(io_err)?);
        let mut header = self.feature_names.join(",");
        header.push(',');
        header.push_str(&self.target_name);
        writeln!(out, "{header}").map_err(io_err)?;
        for i in 0..self.n_rows() {
            let mut line = String::new();
            for j in 0..self.n_features() {
                line.push_str(&format!("{:?},", self.features[(i, j)]));
            }
            line.push_str(&format!("{:?}", self.target[i]));
            writeln!(out, "{line}").map_err(io_err)?;
        }
        out.flush().map_err(io_err)
    }
}

/// Reads a headered, comma-separated file and splits off `target_column`.
///
/// Row numbers in errors are 1-based and count data rows only.
pub fn load_csv(path: impl AsRef<Path>, target_column: &str) -> Result<Dataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(file);

    let header: Vec<String> = reader.headers()?.iter().map(str::to_owned).collect();
    let target_idx = header
        .iter()
        .position(|h| h == target_column)
        .ok_or_else(|| Error::MissingColumn(target_column.to_owned()))?;
    let feature_idx: Vec<usize> = (0..header.len()).filter(|&i| i != target_idx).collect();
    if feature_idx.is_empty() {
        return Err(Error::NoFeatures);
    }

    let mut values: Vec<f64> = Vec::new();
    let mut target = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let row = i + 1;
        let parse = |col: usize| -> Result<f64> {
            let cell = &record[col];
            cell.parse::<f64>().map_err(|_| Error::NonNumeric {
                row,
                column: header[col].clone(),
                value: cell.to_owned(),
            })
        };
        for &col in &feature_idx {
            values.push(parse(col)?);
        }
        target.push(parse(target_idx)?);
    }
    if target.is_empty() {
        return Err(Error::EmptyDataset);
    }

    let features = DMatrix::from_row_slice(target.len(), feature_idx.len(), &values);
    let names = feature_idx.iter().map(|&i| header[i].clone()).collect();
    Dataset::new(features, DVector::from_vec(target), names, target_column)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StdConvention {
    /// Divide by N - 1.
    Sample,
    /// Divide by N.
    Population,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MedianConvention {
    /// Mean of the two middle order statistics when N is even.
    MidpointOfMiddleTwo,
}

/// Target statistics used to normalize risk reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSummary {
    pub n_rows: usize,
    pub target_std: f64,
    pub target_median: f64,
    /// `min |y_i|`, the empirical counterpart of the lower bound on `|Y|`.
    pub target_min_abs: f64,
    pub target_min: f64,
    pub target_max: f64,
    pub std_convention: StdConvention,
    pub median_convention: MedianConvention,
}

pub fn summarize(ds: &Dataset) -> Result<DatasetSummary> {
    summarize_target(ds.target().as_slice())
}

pub(crate) fn summarize_target(y: &[f64]) -> Result<DatasetSummary> {
    let n = y.len();
    if n < 2 {
        return Err(Error::TooFewRows {
            needed: 2,
            found: n,
        });
    }
    let mean = y.iter().sum::<f64>() / n as f64;
    let ss: f64 = y.iter().map(|v| (v - mean).powi(2)).sum();
    let target_std = (ss / (n - 1) as f64).sqrt();

    let mut sorted = y.to_vec();
    sorted.sort_by(f64::total_cmp);
    let target_median = if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    };
    let target_min_abs = y.iter().map(|v| v.abs()).fold(f64::INFINITY, f64::min);

    Ok(DatasetSummary {
        n_rows: n,
        target_std,
        target_median,
        target_min_abs,
        target_min: sorted[0],
        target_max: sorted[n - 1],
        std_convention: StdConvention::Sample,
        median_convention: MedianConvention::MidpointOfMiddleTwo,
    })
}
