//! Energy balance `E(t) + ∫‖u_t‖_m^m = E(0)` along discrete trajectories,
//! and how its residual shrinks as the step is halved.

use cone_wave::integrator::{energy_balance_residual, integrate, RecordOptions, SchemeParams};
use cone_wave::operators::PotentialKind;
use cone_wave::variational::ModelParams;
use cone_wave::{build_grid, rng, Field, GridSpec};

fn main() -> cone_wave::Result<()> {
    let grid = build_grid(GridSpec::new(3, 32, 8, -3.0))?;
    let u0 = rng::smooth_field(&grid, 3, &mut rng::seeded(4));
    let zero = Field::zeros(&grid);
    for (m, beta) in [(2.0, 0.0), (3.0, 1.0), (4.0, 1.0)] {
        let model = ModelParams::with_constant_source(&grid, 3.0, m, 0.0, PotentialKind::None, beta)?;
        let base = SchemeParams::for_grid(&grid, 5.0);
        let mut prev: Option<f64> = None;
        for k in 0..4 {
            let mut scheme = base.clone().with_dt(base.dt / 2f64.powi(k));
            scheme.fixed_step = true;
            let traj = integrate(&model, &scheme, &u0, &zero, RecordOptions::default())?;
            let res = energy_balance_residual(&traj.series)
                .into_iter()
                .fold(0.0f64, |a, r| a.max(r.abs()));
            let ratio = prev.map_or(String::new(), |p| format!("ratio {:.2}", p / res));
            println!("m = {m}, beta = {beta}, dt = {:.5}: max |residual| = {res:.3e} {ratio}", scheme.dt);
            prev = Some(res);
        }
    }
    Ok(())
}
