//! Blow-up from arbitrarily high energy: the threshold constants `M0`, `M`,
//! data `u0 = r1 ω1`, `u1 = r1 ω1 + r2 ω2` at prescribed energies, and the
//! explicit upper bound on the lifespan.

use cone_wave::diagnostics::blowup::lifespan_bound;
use cone_wave::diagnostics::high_energy::{high_energy_constants, solve_high_energy, HighEnergyProblem};
use cone_wave::harness::config::{EnergyLevel, InitKind, RunConfig};
use cone_wave::harness::run::{run_with, setup};

fn main() -> cone_wave::Result<()> {
    let reference = HighEnergyProblem { p: 4.0, m: 2.0, alpha: 1.0, lambda1: 1.0, coercivity: 1.0 };
    let hec = solve_high_energy(&reference)?;
    println!(
        "p = 4, m = 2, unit constants: M0 = {}, M = {:.12} (root of 12M² - 6M - 64), bracket {:?}",
        hec.m0, hec.m, hec.bracket
    );

    let mut config = RunConfig::default();
    config.init.kind = InitKind::HighEnergy;
    config.scheme.t_max = 30.0;
    let s = setup(&config)?;
    let hec = high_energy_constants(&s.model, &s.constants)?;
    println!("grid constants: M0 = {:.6}, M = {:.6}, pairing factor {:.6}", hec.m0, hec.m, hec.threshold_factor);
    for level in [1.5, 2.0, 5.0, 20.0] {
        config.init.energy = EnergyLevel::DepthMultiple(level);
        let o = run_with(&config, &s)?;
        let bound = lifespan_bound(&o.u0, &o.u1, &s.model, &s.constants, 1.0)
            .map(|b| format!("{:.4e}", b.t_upper))
            .unwrap_or_else(|e| format!("n/a ({e})"));
        println!(
            "R = {level}d: E0/d = {:.12}, blow-up at {:?}, lifespan bound {bound}",
            o.e0 / s.constants.d,
            o.blowup_time()
        );
    }
    Ok(())
}
