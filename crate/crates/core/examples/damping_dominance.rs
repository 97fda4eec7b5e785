//! With `m >= p` the damping outgrows the source: amplitudes that blow up
//! quickly under linear damping stay global under `m = 4`.

use cone_wave::harness::config::{InitKind, RunConfig};
use cone_wave::harness::run::{run_with, setup};
use cone_wave::GridSpec;

fn main() -> cone_wave::Result<()> {
    let mut config = RunConfig {
        grid: GridSpec::new(3, 16, 4, -3.0),
        ..RunConfig::default()
    };
    config.init.kind = InitKind::NehariScaled;
    config.scheme.t_max = 5.0;
    let s = setup(&config)?;
    for amplitude in [1.5, 10.0, 100.0] {
        config.init.amplitude = amplitude;
        for m in [2.0, 4.0] {
            let mut c = config.clone();
            c.model.m = m;
            let o = run_with(&c, &s.with_damping_exponent(m))?;
            let last = o.trajectory.series.rows().last().expect("records");
            println!(
                "amplitude {amplitude:>5}, m = {m}: {:<12} E0 = {:>11.4e}, E(end) = {:>11.4e}, ‖u‖ = {:.4e} at t = {:.3}",
                o.classification.as_str(),
                o.e0,
                last.e,
                last.l2,
                last.t
            );
        }
    }
    Ok(())
}
