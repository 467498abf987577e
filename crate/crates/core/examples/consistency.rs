//! Checks the growth conditions for strong consistency when the model class
//! grows with the sample size.
//!
//!     cargo run --example consistency
//!
//! The verdict is a heuristic read of a finite grid. Slowly vanishing ratios
//! such as `n^(-1/6) ln(n)` do not fall a hundredfold by n = 1e8 and are
//! reported as not vanishing; the printed ratios are the real evidence.

use mape_regression::bounds::{consistency_condition, kterm_series, Rate};

fn main() -> mape_regression::Result<()> {
    for (v, b) in [("n^(1/3)", "n^(1/4)"), ("ln(n)", "2"), ("n^2", "2")] {
        let (v, b): (Rate, Rate) = (v.parse()?, b.parse()?);
        let report = consistency_condition(|n| v.eval(n), |n| b.eval(n), 100_000_000)?;
        let last = report.ratios.last().unwrap();
        println!(
            "v = {v:<10} B = {b:<10} ratio at n = {:e}: {:.3e} -> {:?}",
            last.0 as f64, last.1, report.verdict
        );
    }

    let series = kterm_series(&"n^(1/3)".parse()?, &"n^(1/4)".parse()?, 1.0, 0.5, 200)?;
    println!(
        "sum of K(n, 0.5): terms decrease from n = 2^{}, ln(tail) <= {:.4e}, summable: {}",
        series.tail_start.unwrap_or(0),
        series.log_tail_upper_bound,
        series.summable
    );
    Ok(())
}
