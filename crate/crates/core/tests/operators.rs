use std::sync::Arc;

use proptest::prelude::*;

use cone_wave::operators::{
    apply_gradient, apply_laplacian, potential_value, second_eigenpair, smallest_eigenpair,
    PotentialKind, StiffnessSolver,
};
use cone_wave::rng;
use cone_wave::{build_grid, weighted_inner, ConeGrid, Field, GridSpec};

fn grid(n: usize, ns: usize, nx: usize, s_min: f64) -> Arc<ConeGrid> {
    build_grid(GridSpec::new(n, ns, nx, s_min)).unwrap()
}

fn grids() -> impl Strategy<Value = Arc<ConeGrid>> {
    (3usize..=4, 4usize..=10, 1usize..=4, -3.0f64..-0.5)
        .prop_map(|(n, ns, nx, s_min)| grid(n, ns, nx, s_min))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn laplacian_is_symmetric_and_negative(g in grids(), seed in any::<u64>()) {
        let mut r = rng::seeded(seed);
        let f = rng::gaussian_field(&g, &mut r);
        let h = rng::gaussian_field(&g, &mut r);
        let (lf, lh) = (apply_laplacian(&f), apply_laplacian(&h));
        let a = weighted_inner(&lf, &h).unwrap();
        let b = weighted_inner(&f, &lh).unwrap();
        prop_assert!((a - b).abs() <= 1e-11 * a.abs().max(b.abs()).max(1.0));
        let grad = apply_gradient(&f).norm_sq();
        prop_assert!(grad > 0.0);
        prop_assert!((weighted_inner(&lf, &f).unwrap() + grad).abs() <= 1e-11 * grad);
    }

    #[test]
    fn solver_inverts_the_laplacian(g in grids(), seed in any::<u64>()) {
        let solver = StiffnessSolver::new(&g).unwrap();
        let b = rng::gaussian_field(&g, &mut rng::seeded(seed));
        let x = Field::from_values(&g, solver.solve(b.values()).unwrap()).unwrap();
        let back = apply_laplacian(&x).scaled(-1.0);
        let err = back.add_scaled(-1.0, &b).unwrap().max_abs();
        prop_assert!(err <= 1e-9 * b.max_abs());
    }

    #[test]
    fn v2_is_bounded_by_its_axis_value(x1 in 0.01f64..1.0, r in 0.0f64..3.0, n in 3usize..7) {
        let on_axis = potential_value(PotentialKind::V2, x1, 0.0, n).unwrap();
        let off = potential_value(PotentialKind::V2, x1, r, n).unwrap();
        prop_assert!(off >= 0.0 && off <= on_axis * (1.0 + 1e-15));
    }
}

#[test]
fn eigenpair_is_positive_and_normalized() {
    let g = grid(3, 16, 4, -2.0);
    let e = smallest_eigenpair(&g).unwrap();
    assert!(e.lambda1 > 0.0);
    assert!(e.omega1.values().iter().all(|&x| x >= 0.0) || e.omega1.values().iter().all(|&x| x <= 0.0));
    let residual = apply_laplacian(&e.omega1).add_scaled(e.lambda1, &e.omega1).unwrap();
    assert!(weighted_inner(&residual, &residual).unwrap().sqrt() < 1e-8);
}

#[test]
fn second_eigenpair_lies_above_the_first() {
    let g = grid(3, 12, 4, -2.0);
    let solver = StiffnessSolver::new(&g).unwrap();
    let e = smallest_eigenpair(&g).unwrap();
    let (l2, w2) = second_eigenpair(&solver, &e.omega1).unwrap();
    assert!(l2 > e.lambda1 * (1.0 + 1e-6));
    let overlap = weighted_inner(&w2, &e.omega1).unwrap();
    assert!(overlap.abs() < 1e-8 * weighted_inner(&w2, &w2).unwrap().sqrt());
}

#[test]
fn radial_reduction_matches_the_discrete_sine_spectrum() {
    // With one torus node the operator is the 1D Dirichlet second difference.
    let s_min = -2.0f64;
    for ns in [6, 12, 24] {
        let g = grid(3, ns, 1, s_min);
        let h = s_min.abs() / ns as f64;
        let exact = 4.0 / (h * h) * (std::f64::consts::PI * h / (2.0 * s_min.abs())).sin().powi(2);
        let got = smallest_eigenpair(&g).unwrap().lambda1;
        assert!((got - exact).abs() < 1e-10 * exact, "ns = {ns}: {got} vs {exact}");
    }
}

#[test]
fn potentials_reject_bad_arguments() {
    assert!(potential_value(PotentialKind::V1, 0.0, 0.0, 5).is_err());
    assert!(potential_value(PotentialKind::V1, 0.5, 0.0, 2).is_err());
    assert!(potential_value(PotentialKind::Constant(-1.0), 0.5, 0.0, 3).is_err());
    assert_eq!(potential_value(PotentialKind::V1, 0.5, 0.0, 3).unwrap(), 0.0);
    // ((5-3)/2)^2 / (x1^2 + |x'|^2) at x1 = 0.5, |x'| = 0.5
    assert!((potential_value(PotentialKind::V1, 0.5, 0.5, 5).unwrap() - 2.0).abs() < 1e-15);
}
