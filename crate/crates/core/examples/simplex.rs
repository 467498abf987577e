//! Solves a small standard-form LP and cross-checks it against brute-force
//! vertex enumeration.
//!
//!     cargo run --example simplex

use mape_regression::lp::{enumerate_vertices_oracle, solve, StandardFormLp};

fn main() -> mape_regression::Result<()> {
    // max 3a + 2b  s.t.  a + b <= 4,  a + 3b <= 6,  a, b >= 0
    // written as min -3a - 2b with slacks s1, s2.
    let lp = StandardFormLp::new(
        vec![-3.0, -2.0, 0.0, 0.0],
        vec![vec![1.0, 1.0, 1.0, 0.0], vec![1.0, 3.0, 0.0, 1.0]],
        vec![4.0, 6.0],
    )?;
    let simplex = solve(&lp)?;
    let oracle = enumerate_vertices_oracle(&lp)?;
    println!(
        "simplex: {:?}, objective {}, x = {:?}, {} pivots",
        simplex.status, simplex.objective_value, simplex.x, simplex.iterations
    );
    println!(
        "oracle:  {:?}, objective {}",
        oracle.status, oracle.objective_value
    );

    let unbounded = StandardFormLp::new(vec![-1.0, 0.0], vec![vec![1.0, -1.0]], vec![1.0])?;
    println!("unbounded case: {:?}", solve(&unbounded)?.status);
    let infeasible = StandardFormLp::new(vec![1.0, 1.0], vec![vec![1.0, 1.0]], vec![-1.0])?;
    println!("infeasible case: {:?}", solve(&infeasible)?.status);
    Ok(())
}
