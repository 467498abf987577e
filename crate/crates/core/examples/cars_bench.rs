//! Fits the stopping-distance data under all three losses and prints the
//! cross-loss risk matrix.
//!
//!     cargo run --example cars_bench

use mape_regression::bench::run_bench;
use mape_regression::load_csv;

fn main() -> mape_regression::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/cars.csv");
    let ds = load_csv(path, "dist")?;
    let bench = run_bench(&ds)?;

    print!("{}", bench.render_table());
    for row in &bench.rows {
        println!(
            "{:<5} dist = {:8.4} + {:.4} * speed",
            row.loss.to_string(),
            row.model.intercept,
            row.model.coefficients[0]
        );
    }
    println!(
        "each loss wins its own column: {}",
        bench.diagonal_dominance()
    );
    Ok(())
}
