//! Computes the VC dimension of a small tabulated model class under the
//! percentage loss and under the absolute loss with thresholds scaled by |y|.
//!
//!     cargo run --example shatter [class.json]

use mape_regression::shatter::{compare_mape_mae, shattering_vc, FiniteModelClass};
use mape_regression::LossKind;

fn main() -> mape_regression::Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| {
        concat!(env!("CARGO_MANIFEST_DIR"), "/data/shatter_example.json").to_string()
    });
    let cls = FiniteModelClass::from_json_file(&path)?;
    println!(
        "{} models on {} probes",
        cls.models().len(),
        cls.probes().len()
    );
    println!(
        "unscaled MAE dimension: {}",
        shattering_vc(&cls, LossKind::Mae)?
    );
    let cmp = compare_mape_mae(&cls)?;
    println!(
        "MAPE {} <= scaled MAE {}: {}",
        cmp.mape, cmp.mae_scaled, cmp.pass
    );
    Ok(())
}
