mod common;

use mape_regression::lp::{
    enumerate_vertices_oracle, solve, solve_with, LpStatus, SimplexOptions, StandardFormLp,
};
use rand::rngs::StdRng;
use rand::SeedableRng;

fn check_feasible(lp: &StandardFormLp, x: &[f64]) {
    let b_norm = lp.rhs().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    assert!(
        lp.residual_inf_norm(x) <= 1e-8 * (1.0 + b_norm),
        "{lp:?} {x:?}"
    );
    assert!(x.iter().all(|&v| v >= -1e-9), "{x:?}");
}

#[test]
fn simplex_agrees_with_vertex_enumeration() {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut counts = [0usize; 3];
    for _ in 0..500 {
        let (lp, _) = common::random_lp(&mut rng);
        let s = solve(&lp).unwrap();
        let o = enumerate_vertices_oracle(&lp).unwrap();
        assert_eq!(s.status, o.status, "{lp:?}");
        counts[s.status as usize] += 1;
        if s.status == LpStatus::Optimal {
            assert!(
                (s.objective_value - o.objective_value).abs() <= 1e-8,
                "{lp:?}"
            );
            check_feasible(&lp, &s.x);
            check_feasible(&lp, &o.x);
        }
    }
    // every status should show up in a sample this size
    assert!(counts.iter().all(|&c| c > 20), "{counts:?}");
}

#[test]
fn known_feasible_points_bound_the_optimum() {
    let mut rng = StdRng::seed_from_u64(7);
    let mut checked = 0;
    while checked < 200 {
        let (lp, x0) = common::random_lp(&mut rng);
        let Some(x0) = x0 else { continue };
        let s = solve(&lp).unwrap();
        assert_ne!(s.status, LpStatus::Infeasible);
        if s.status == LpStatus::Optimal {
            assert!(lp.objective_value(&x0) >= s.objective_value - 1e-8);
        }
        checked += 1;
    }
}

#[test]
fn pure_bland_pricing_matches_default() {
    let mut rng = StdRng::seed_from_u64(99);
    let bland = SimplexOptions {
        bland_after: Some(0),
        ..Default::default()
    };
    for _ in 0..200 {
        let (lp, _) = common::random_lp(&mut rng);
        let a = solve(&lp).unwrap();
        let b = solve_with(&lp, &bland).unwrap();
        assert_eq!(a.status, b.status);
        if a.status == LpStatus::Optimal {
            assert!((a.objective_value - b.objective_value).abs() <= 1e-8);
        }
    }
}

#[test]
fn highly_degenerate_problem_terminates() {
    // Many copies of the same constraint through the origin.
    let n = 12;
    let row: Vec<f64> = (0..n)
        .map(|j| if j % 2 == 0 { 1.0 } else { -1.0 })
        .collect();
    let rows = vec![row; 6];
    let c: Vec<f64> = (0..n).map(|j| (j as f64) - 5.0).collect();
    let mut constrained = rows.clone();
    constrained.push(vec![1.0; n]);
    let lp = StandardFormLp::new(c, constrained, vec![0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0]).unwrap();
    let s = solve(&lp).unwrap();
    let o = enumerate_vertices_oracle(&lp).unwrap();
    assert_eq!(s.status, o.status);
    assert!((s.objective_value - o.objective_value).abs() < 1e-9);
}
