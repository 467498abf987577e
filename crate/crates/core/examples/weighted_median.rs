//! With no informative feature, weighted LAD reduces to a weighted median of
//! the targets, and MAPE picks the median under weights 1/|y|: it leans
//! toward small targets.
//!
//!     cargo run --example weighted_median

use mape_regression::{fit, Dataset, LossKind};

fn main() -> mape_regression::Result<()> {
    let y = [1.0, 2.0, 10.0, 40.0, 100.0];
    // A zero feature column gives an intercept-only model.
    let rows = vec![vec![0.0]; y.len()];
    let ds = Dataset::from_rows(&rows, &y)?;

    for kind in LossKind::ALL {
        let model = fit(&ds, kind)?;
        println!("{kind:<4} constant prediction: {}", model.intercept);
    }
    Ok(())
}
