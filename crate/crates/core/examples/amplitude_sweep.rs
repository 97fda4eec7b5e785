//! Phase table over the amplitude of Nehari-scaled data: blow-up happens
//! exactly when the trajectory enters `{E < d} ∩ V`.

use cone_wave::harness::config::{InitKind, RunConfig, SweepAxis, SweepConfig};
use cone_wave::harness::sweep::{phase_table, sweep};

fn main() -> cone_wave::Result<()> {
    let mut base = RunConfig::default();
    base.init.kind = InitKind::NehariScaled;
    base.scheme.t_max = 30.0;
    base.output.record_every = 5;
    let config = SweepConfig {
        base,
        axis: SweepAxis::Amplitude,
        values: (0..16).map(|k| 0.2 + 0.12 * k as f64).collect(),
        workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    print!("{}", phase_table(&sweep(&config)?));
    Ok(())
}
