//! Linear damped waves started from the ground mode reduce to the scalar
//! oscillator `y'' + y' + λ1 y = 0`; this compares the solver with it.

use cone_wave::integrator::{integrate_with, RecordOptions, SchemeParams};
use cone_wave::operators::PotentialKind;
use cone_wave::variational::ModelParams;
use cone_wave::{build_grid, smallest_eigenpair, weighted_inner, Field, GridSpec};

fn main() -> cone_wave::Result<()> {
    let grid = build_grid(GridSpec::new(3, 24, 6, -3.0))?;
    let eig = smallest_eigenpair(&grid)?;
    let model = ModelParams::with_constant_source(&grid, 3.0, 2.0, 0.0, PotentialKind::None, 0.0)?;
    let w = (eig.lambda1 - 0.25).sqrt();
    let y = |t: f64| (-0.5 * t).exp() * ((w * t).cos() + (w * t).sin() / (2.0 * w));
    for dt in [1e-2, 5e-3, 1e-3] {
        let mut scheme = SchemeParams::for_grid(&grid, 5.0).with_dt(dt);
        scheme.fixed_step = true;
        let mut worst = 0.0f64;
        integrate_with(&model, &scheme, &eig.omega1, &Field::zeros(&grid), RecordOptions::default(), |s| {
            let gap = s.u.add_scaled(-y(s.t), &eig.omega1).expect("same grid");
            worst = worst.max(weighted_inner(&gap, &gap).expect("same grid").sqrt());
        })?;
        println!("dt = {dt:.0e}: max ‖u - y(t) ω1‖ = {worst:.3e}");
    }
    Ok(())
}
