//! The fibering map `λ ↦ J(λu)`: a single peak at `λ*` where `I(λ*u) = 0`,
//! with `W` below and `V` above along the ray.

use cone_wave::operators::PotentialKind;
use cone_wave::variational::{
    classify_parts, energy_parts, lambda_star, nehari_level, ModelParams,
};
use cone_wave::{build_grid, rng, GridSpec};

fn main() -> cone_wave::Result<()> {
    let grid = build_grid(GridSpec::new(3, 16, 4, -3.0))?;
    let model = ModelParams::with_constant_source(&grid, 3.0, 2.0, 0.0, PotentialKind::None, 1.0)?;
    let u = rng::smooth_field(&grid, 3, &mut rng::seeded(2));
    let star = lambda_star(&u, &model)?.value().expect("the ray crosses the Nehari manifold");
    println!("lambda* = {star:.6}, J(lambda* u) = {:.6}", nehari_level(&u, &model)?.unwrap());
    println!("{:>8} {:>14} {:>14} {:>8}", "lambda", "J", "I", "label");
    for k in 0..=12 {
        let l = star * k as f64 / 6.0;
        let parts = energy_parts(&u.scaled(l), &model)?;
        let label = classify_parts(&parts, model.p, f64::INFINITY);
        println!("{l:>8.4} {:>14.6} {:>14.6} {:>8}", parts.j(model.p), parts.i(), label);
    }
    Ok(())
}
