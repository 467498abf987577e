//! Linear regression under squared, absolute and absolute-percentage losses.
//!
//! Minimizing the mean absolute percentage error over affine models is a
//! weighted least-absolute-deviation problem with weights `1 / |y_i|`, which
//! this crate solves exactly as a linear program ([`regress::fit`]). Around
//! that sit CSV ingestion ([`data`]), losses and normalized reports
//! ([`loss`]), a dense simplex solver ([`lp`]), evaluators for covering-number
//! and uniform-convergence bounds ([`bounds`]) and an exhaustive VC-dimension
//! checker ([`shatter`]).

pub mod bench;
pub mod bounds;
pub mod cli;
pub mod data;
pub mod error;
pub mod loss;
pub mod lp;
pub mod regress;
pub mod shatter;

pub use data::{load_csv, summarize, Dataset, DatasetSummary};
pub use error::{Error, Result};
pub use loss::{empirical_risk, loss, risk_report, LossKind, RiskReport};
pub use regress::{fit, fit_ols, fit_weighted_lad, predict, InstanceWeights, LinearModel};
