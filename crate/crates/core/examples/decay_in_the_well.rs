//! Data in the potential well below the depth: exponential energy decay for
//! linear damping, algebraic decay `(1+t)^{-2/(m-2)}` for `m > 2`, and the
//! coercivity margin `I(u) >= θ‖∇u‖²` along the way.

use cone_wave::diagnostics::decay::{expected_algebraic_slope, nakao_bound};
use cone_wave::harness::config::{InitKind, RunConfig};
use cone_wave::harness::run::{run_with, setup};

fn main() -> cone_wave::Result<()> {
    let mut config = RunConfig::default();
    config.init.kind = InitKind::NehariScaled;
    config.init.amplitude = 0.47;
    config.output.record_every = 5;
    let base = setup(&config)?;
    for (m, t_max) in [(2.0, 40.0), (3.0, 200.0), (4.0, 400.0)] {
        config.model.m = m;
        config.scheme.t_max = t_max;
        let o = run_with(&config, &base.with_damping_exponent(m))?;
        let fit = o.decay.as_ref().expect("enough samples for a fit");
        let expected = if m == 2.0 { String::new() } else { format!(" (expected {})", expected_algebraic_slope(m)) };
        println!(
            "m = {m}: E0/d = {:.3}, {:?} rate {:.4}{expected}, r² = {:.4}, theta = {:.4}, min coercivity margin = {:.4}",
            o.e0 / base.constants.d,
            fit.mode,
            fit.rate,
            fit.r_squared,
            o.monitor.theta.unwrap_or(f64::NAN),
            o.monitor.coercivity_margin.unwrap_or(f64::NAN)
        );
    }
    println!("difference-inequality bounds for phi0 = 1, k0 = 4:");
    for t in [1.0, 5.0, 20.0, 100.0] {
        println!(
            "  t = {t:>5}: r = 0 -> {:.4e}, r = 1 -> {:.4e}",
            nakao_bound(1.0, 4.0, 0.0, t)?,
            nakao_bound(1.0, 4.0, 1.0, t)?
        );
    }
    Ok(())
}
