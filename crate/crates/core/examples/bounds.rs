//! Evaluates the loss envelopes, the VC covering bound and the uniform
//! deviation bound for the percentage loss, and shows how many samples the
//! deviation bound needs before it becomes informative.
//!
//!     cargo run --example bounds

use mape_regression::bounds::{envelope_bound, ulln_bound, vc_covering_bound, BoundInputs};
use mape_regression::LossKind;

fn main() -> mape_regression::Result<()> {
    let (b_g, lambda) = (9.0, 1.0);
    println!(
        "envelope MAPE(B_G = 9, lambda = 1) = {}",
        envelope_bound(LossKind::Mape, b_g, None, Some(lambda))?
    );
    println!(
        "envelope MAE (B_G = 9, B_Y = 1)    = {}",
        envelope_bound(LossKind::Mae, b_g, Some(1.0), None)?
    );
    println!(
        "envelope MSE (B_G = 9, B_Y = 1)    = {}",
        envelope_bound(LossKind::Mse, b_g, Some(1.0), None)?
    );

    let mut inputs = BoundInputs {
        n: 1,
        epsilon: 0.1,
        b_g,
        b_y: None,
        lambda: Some(lambda),
        vc: 2,
        p: 1,
    };
    let cover = vc_covering_bound(&inputs, LossKind::Mape)?;
    println!(
        "covering number bound at eps = 0.1: {:.6e}",
        cover.result.value
    );

    inputs.epsilon = 1.0;
    for exp in [5, 6, 7, 8, 9, 12] {
        inputs.n = 10u64.pow(exp);
        let r = ulln_bound(&inputs, LossKind::Mape)?;
        println!(
            "n = 1e{exp:<2} deviation probability bound: ln = {:>12.3}, value = {:.3e}",
            r.result.log_value, r.result.value
        );
    }
    Ok(())
}
