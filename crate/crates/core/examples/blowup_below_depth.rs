//! Finite-time blow-up from negative energy and from `0 <= E(0) < d` with
//! `I(u0) < 0`, its insensitivity to the norm ceiling, and the calibrated
//! Lyapunov time bound.

use cone_wave::diagnostics::blowup::{
    calibrate_time_constant, lyapunov_initial, midpoint_level, subcritical_eta_range,
};
use cone_wave::harness::config::{InitKind, RunConfig};
use cone_wave::harness::run::{initial_data, run_with, setup};
use cone_wave::integrator::default_blowup_cap;

fn main() -> cone_wave::Result<()> {
    let mut config = RunConfig::default();
    config.init.kind = InitKind::NehariScaled;
    config.scheme.t_max = 30.0;
    let s = setup(&config)?;
    let d = s.constants.d;
    let eta = subcritical_eta_range(s.model.p, s.model.m)?;
    for amplitude in [2.0, 1.3] {
        config.init.amplitude = amplitude;
        let (u0, u1) = initial_data(&config, &s)?;
        let cap = default_blowup_cap(&u0, &u1);
        let mut times = Vec::new();
        for factor in [1.0, 10.0, 100.0] {
            let mut c = config.clone();
            c.scheme.blowup_cap = Some(factor * cap);
            times.push(run_with(&c, &s)?.blowup_time().expect("blow-up"));
        }
        let o = run_with(&config, &s)?;
        let row0 = &o.trajectory.series.rows()[0];
        let level = if o.e0 < 0.0 { 0.0 } else { midpoint_level(o.e0, d) };
        let l0 = lyapunov_initial(o.e0, level, row0.pairing, eta, 0.1)?;
        println!(
            "amplitude {amplitude}: E0/d = {:.3}, I(u0) = {:.3}, blow-up at {:.4} / {:.4} / {:.4} (cap x1, x10, x100), calibrated C = {:.4}",
            o.e0 / d,
            row0.i,
            times[0],
            times[1],
            times[2],
            calibrate_time_constant(l0, eta, times[0])?
        );
    }
    Ok(())
}
