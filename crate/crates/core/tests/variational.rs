use std::sync::Arc;

use proptest::prelude::*;

use cone_wave::operators::StiffnessSolver;
use cone_wave::rng;
use cone_wave::variational::{
    classify_parts, depth_formula, energy_parts, estimate_embedding_constant, functional_i,
    functional_j, gn_ratio, lambda_star, nehari_level, theta_from, FiberScale, ModelParams,
    WellLabel,
};
use cone_wave::{build_grid, ConeGrid, GridSpec, PotentialKind};

fn grid() -> Arc<ConeGrid> {
    build_grid(GridSpec::new(3, 10, 4, -2.0)).unwrap()
}

fn model(p: f64) -> ModelParams {
    ModelParams::with_constant_source(&grid(), p, 2.0, 0.0, PotentialKind::None, 1.0).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fibering_map_peaks_on_the_nehari_manifold(seed in any::<u64>(), p in 2.2f64..3.9) {
        let m = model(p);
        let u = rng::smooth_field(m.grid(), 3, &mut rng::seeded(seed));
        let FiberScale::Crossing(l) = lambda_star(&u, &m).unwrap() else {
            return Err(TestCaseError::fail("no crossing"));
        };
        let star = u.scaled(l);
        let parts = energy_parts(&star, &m).unwrap();
        prop_assert!(functional_i(&star, &m).unwrap().abs() <= 1e-10 * parts.a);
        let peak = functional_j(&star, &m).unwrap();
        for f in [0.5, 0.9, 1.1, 2.0] {
            prop_assert!(functional_j(&u.scaled(l * f), &m).unwrap() < peak);
        }
        prop_assert!((nehari_level(&u, &m).unwrap().unwrap() - peak).abs() <= 1e-10 * peak);
    }

    #[test]
    fn functionals_scale_homogeneously(seed in any::<u64>(), c in 0.1f64..10.0) {
        let m = model(3.0);
        let u = rng::gaussian_field(m.grid(), &mut rng::seeded(seed));
        let a = energy_parts(&u, &m).unwrap();
        let b = energy_parts(&u.scaled(c), &m).unwrap();
        prop_assert!((b.grad_sq - c * c * a.grad_sq).abs() <= 1e-12 * b.grad_sq);
        prop_assert!((b.source - c.powi(3) * a.source).abs() <= 1e-12 * b.source);
        prop_assert!((gn_ratio(&u.scaled(c), 1.5, 4.0).unwrap() / gn_ratio(&u, 1.5, 4.0).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn theta_decreases_with_energy(e1 in 0.0f64..0.99, e2 in 0.0f64..0.99) {
        let (lo, hi) = if e1 < e2 { (e1, e2) } else { (e2, e1) };
        let d = depth_formula(3.0, 0.0, 0.5, 0.0).unwrap();
        let t_lo = theta_from(lo * d, 0.5, 1.0, d, 3.0).unwrap();
        let t_hi = theta_from(hi * d, 0.5, 1.0, d, 3.0).unwrap();
        prop_assert!(t_hi <= t_lo && t_hi > 0.0 && t_lo <= 1.0);
    }
}

#[test]
fn nehari_levels_stay_above_the_depth() {
    let m = model(3.0);
    let solver = StiffnessSolver::new(m.grid()).unwrap();
    let c = estimate_embedding_constant(&m, &solver, 4, 11).unwrap();
    assert!(c.converged);
    let d = depth_formula(3.0, 0.0, c.value, 0.0).unwrap();
    let level = nehari_level(&c.maximizer, &m).unwrap().unwrap();
    assert!((level / d - 1.0).abs() < 1e-8, "maximizer level {level} vs d {d}");
    let mut r = rng::seeded(5);
    for _ in 0..200 {
        let u = rng::smooth_field(m.grid(), 5, &mut r);
        assert!(nehari_level(&u, &m).unwrap().unwrap() >= d * (1.0 - 1e-10));
    }
}

#[test]
fn theta_vanishes_at_the_depth() {
    let d = depth_formula(3.0, 0.0, 0.5, 0.0).unwrap();
    let t = theta_from(d * (1.0 - 1e-12), 0.5, 1.0, d, 3.0).unwrap();
    assert!(t.abs() < 1e-6);
    assert!(theta_from(d, 0.5, 1.0, d, 3.0).is_err());
}

#[test]
fn labels_split_the_sublevel_set() {
    let m = model(3.0);
    let d = 1.0;
    let u = rng::smooth_field(m.grid(), 2, &mut rng::seeded(1));
    let l = lambda_star(&u, &m).unwrap().value().unwrap();
    let parts = |f: f64| energy_parts(&u.scaled(f * l), &m).unwrap();
    let big_d = 1e9;
    assert_eq!(classify_parts(&parts(0.5), 3.0, big_d), WellLabel::InsideW);
    assert_eq!(classify_parts(&parts(1.5), 3.0, big_d), WellLabel::InsideV);
    assert_eq!(classify_parts(&parts(1.0), 3.0, big_d), WellLabel::OnNehari);
    assert_eq!(classify_parts(&parts(0.0), 3.0, d), WellLabel::Zero);
    assert_eq!(classify_parts(&parts(0.5), 3.0, 1e-12), WellLabel::AboveD);
}

#[test]
fn model_validation() {
    let g = grid();
    for (p, m, gamma) in [(2.0, 2.0, 0.0), (4.0, 2.0, 0.0), (3.0, 1.0, 0.0)] {
        assert!(ModelParams::with_constant_source(&g, p, m, gamma, PotentialKind::None, 1.0).is_err());
    }
    assert!(depth_formula(3.0, 2.0, 0.5, 1.0).is_err());
}
