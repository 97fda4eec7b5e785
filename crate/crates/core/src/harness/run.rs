//! One simulation from a configuration: setup, initial data, integration,
//! diagnostics and the summary.

use std::path::Path;
use std::sync::Arc;

use crate::diagnostics::blowup::{lifespan_bound, subcritical_eta_range};
use crate::diagnostics::decay::{fit_decay, DecayMode, DecayReport};
use crate::diagnostics::high_energy::{
    construct_high_energy_data, high_energy_blowup_check, high_energy_constants,
};
use crate::diagnostics::monitor::{
    blowup_equivalence, equivalence_applies, invariant_set_monitor, Equivalence, MonitorReport,
};
use crate::error::{Error, Result};
use crate::geometry::{build_grid, weighted_inner, ConeGrid, Field};
use crate::harness::config::{EnergyLevel, InitKind, Profile, RunConfig, SourceProfile};
use crate::harness::output::{series_csv, write_file, Summary};
use crate::integrator::{default_blowup_cap, integrate, RecordOptions, SchemeParams, Trajectory};
use crate::operators::second_eigenpair;
use crate::rng;
use crate::variational::{
    compute_well_constants, lambda_star, sampled_nehari_infimum, theta_from, FiberScale, ModelParams,
    SpectralData, WellConstants, WellLabel,
};

/// Exit code of a run that ended in numerical blow-up.
pub const BLOWUP_EXIT_CODE: i32 = 3;

/// Everything that depends on the grid and model but not on the data.
#[derive(Debug, Clone)]
pub struct Setup {
    pub grid: Arc<ConeGrid>,
    pub model: ModelParams,
    pub spectral: SpectralData,
    pub constants: WellConstants,
    /// Sampled infimum of `J` over the Nehari manifold, when requested.
    pub sampled_depth: Option<f64>,
}

impl Setup {
    /// Same setup with another damping exponent; no constant depends on `m`.
    pub fn with_damping_exponent(&self, m: f64) -> Self {
        let mut s = self.clone();
        s.model.m = m;
        s
    }
}

pub fn build_model(config: &RunConfig, grid: &Arc<ConeGrid>) -> Result<ModelParams> {
    let mc = &config.model;
    let g = match mc.g {
        SourceProfile::Constant => Field::constant(grid, mc.beta),
        SourceProfile::RadialLinear => {
            let values = (0..grid.interior_count())
                .map(|i| mc.beta * 0.5 * (1.0 + grid.x1(i)))
                .collect();
            Field::from_values(grid, values)?
        }
    };
    ModelParams::new(mc.p, mc.m, mc.gamma, mc.potential, g)
}

pub fn setup(config: &RunConfig) -> Result<Setup> {
    let violations = config.violations();
    if !violations.is_empty() {
        let errors = violations
            .into_iter()
            .map(|(key, message)| crate::harness::config::ConfigError {
                line: None,
                key,
                message,
            })
            .collect();
        return Err(crate::harness::config::ConfigErrors(errors).into());
    }
    let grid = build_grid(config.grid.clone())?;
    let model = build_model(config, &grid)?;
    let spectral = SpectralData::new(&grid)?;
    let constants = compute_well_constants(
        &model,
        &spectral,
        config.constants.restarts,
        config.init.seed,
    )?;
    let sampled_depth = if config.constants.nehari_samples > 0 {
        Some(sampled_nehari_infimum(
            &model,
            config.constants.nehari_samples,
            config.init.seed,
        )?)
    } else {
        None
    };
    Ok(Setup {
        grid,
        model,
        spectral,
        constants,
        sampled_depth,
    })
}

fn gaussian_bump(config: &RunConfig, grid: &Arc<ConeGrid>) -> Field {
    let spec = grid.spec();
    let s0 = config.init.center_s.unwrap_or(0.5 * spec.s_min);
    let l = spec.torus_length;
    let w2 = config.init.width * config.init.width;
    Field::from_fn(grid, |s, x| {
        let r2: f64 = x
            .iter()
            .map(|xi| {
                let d = (xi - 0.5 * l).abs();
                let d = d.min(l - d);
                d * d
            })
            .sum();
        (-((s - s0) * (s - s0) + r2) / w2).exp()
    })
}

/// `ω2` orthogonalized against `ω1` and normalized.
fn second_mode(setup: &Setup) -> Result<Field> {
    let omega1 = &setup.spectral.eigen.omega1;
    let (_, omega2) = second_eigenpair(&setup.spectral.solver, omega1)?;
    let c = weighted_inner(&omega2, omega1)? / weighted_inner(omega1, omega1)?;
    let w = omega2.add_scaled(-c, omega1)?;
    let norm = weighted_inner(&w, &w)?.sqrt();
    Ok(w.scaled(1.0 / norm))
}

/// The initial data `(u0, u1)` described by `config.init`.
pub fn initial_data(config: &RunConfig, setup: &Setup) -> Result<(Field, Field)> {
    let grid = &setup.grid;
    let init = &config.init;
    let omega1 = &setup.spectral.eigen.omega1;
    let zero = Field::zeros(grid);
    match init.kind {
        InitKind::Eigenmode => Ok((omega1.scaled(init.amplitude), zero)),
        InitKind::GaussianBump => Ok((gaussian_bump(config, grid).scaled(init.amplitude), zero)),
        InitKind::NehariScaled => {
            let base = match init.profile {
                Profile::Eigenmode => omega1.clone(),
                Profile::GaussianBump => gaussian_bump(config, grid),
                Profile::Random => rng::smooth_field(grid, 4, &mut rng::substream(init.seed, 1)),
            };
            match lambda_star(&base, &setup.model)? {
                FiberScale::Crossing(l) => Ok((base.scaled(l * init.amplitude), zero)),
                other => Err(Error::Hypothesis(format!(
                    "the profile does not cross the Nehari manifold ({other:?})"
                ))),
            }
        }
        InitKind::HighEnergy => {
            let r = match init.energy {
                EnergyLevel::Absolute(v) => v,
                EnergyLevel::DepthMultiple(k) => k * setup.constants.d,
            };
            let hec = high_energy_constants(&setup.model, &setup.constants)?;
            let omega2 = second_mode(setup)?;
            construct_high_energy_data(r, omega1, &omega2, &setup.model, &hec)
        }
    }
}

pub fn scheme_for(config: &RunConfig, grid: &ConeGrid, u0: &Field, u1: &Field) -> SchemeParams {
    let sc = &config.scheme;
    let mut scheme = SchemeParams::for_grid(grid, sc.t_max);
    scheme.cfl_safety = sc.cfl_safety;
    scheme.dt = sc.dt.unwrap_or_else(|| SchemeParams::stable_dt(grid, sc.cfl_safety));
    scheme.blowup_cap = sc.blowup_cap.unwrap_or_else(|| default_blowup_cap(u0, u1));
    scheme.newton_tol = sc.newton_tol;
    scheme.damping = sc.damping;
    scheme.fixed_step = sc.fixed_step;
    scheme
}

/// How a run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    /// Reached `t_max` without a decay fit.
    Global,
    /// Reached `t_max` with a decaying energy fit.
    GlobalDecay,
    BlowUp,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Global => "global",
            Self::GlobalDecay => "global-decay",
            Self::BlowUp => "blow-up",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Self::BlowUp => BLOWUP_EXIT_CODE,
            _ => 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub classification: Classification,
    pub trajectory: Trajectory,
    pub u0: Field,
    pub u1: Field,
    pub e0: f64,
    pub scheme: SchemeParams,
    pub decay: Option<DecayReport>,
    pub monitor: MonitorReport,
    pub equivalence: Equivalence,
    pub summary: Summary,
}

impl RunOutcome {
    pub fn blowup_time(&self) -> Option<f64> {
        self.trajectory.blowup.as_ref().map(|b| b.t)
    }
}

pub fn run(config: &RunConfig) -> Result<RunOutcome> {
    let setup = setup(config)?;
    run_with(config, &setup)
}

/// Runs `config` against a prepared setup.
pub fn run_with(config: &RunConfig, setup: &Setup) -> Result<RunOutcome> {
    let (u0, u1) = initial_data(config, setup)?;
    let scheme = scheme_for(config, &setup.grid, &u0, &u1);
    let model = &setup.model;
    let constants = &setup.constants;
    let record = RecordOptions {
        every: config.output.record_every,
        depth: constants.d,
    };
    let trajectory = integrate(model, &scheme, &u0, &u1, record)?;
    let series = &trajectory.series;
    let e0 = series.rows()[0].e;
    let decay = if trajectory.blowup.is_none() {
        fit_decay(series, model.m).ok()
    } else {
        None
    };
    let decaying = decay.as_ref().is_some_and(|d| match d.mode {
        DecayMode::Exponential => d.rate > 0.0,
        DecayMode::Algebraic => d.rate < 0.0,
    });
    let classification = if trajectory.blowup.is_some() {
        Classification::BlowUp
    } else if decaying {
        Classification::GlobalDecay
    } else {
        Classification::Global
    };
    let monitor = invariant_set_monitor(series, constants, model.p);
    let equivalence = blowup_equivalence(
        &monitor,
        trajectory.blowup.is_some(),
        equivalence_applies(model, constants),
    );

    let mut s = constants_summary(config, setup);
    s.text("init.kind", config.init.kind.as_str());
    s.num("init.amplitude", config.init.amplitude);
    s.num("scheme.dt", scheme.dt);
    s.num("scheme.blowup_cap", scheme.blowup_cap);
    s.text("scheme.damping", scheme.damping.as_str());
    s.num("E0", e0);
    s.num("E0_over_d", e0 / constants.d);
    s.num("pairing0", weighted_inner(&u0, &u1)?);
    s.text("label0", series.rows()[0].label);
    if series.rows()[0].label == WellLabel::InsideW && e0 >= 0.0 && e0 < constants.d {
        if let Ok(theta) = theta_from(e0, constants.c_star_emb, constants.c1, constants.d, model.p) {
            s.num("theta", theta);
        }
    }
    s.text("classification", classification.as_str());
    s.text("steps", trajectory.steps);
    s.text("records", series.len());
    match &trajectory.blowup {
        Some(b) => {
            s.num("blowup_time", b.t);
            s.text("blowup_reason", format!("{:?}", b.reason));
        }
        None => s.text("blowup_time", "none"),
    }
    if let Some(d) = &decay {
        s.text("decay.mode", format!("{:?}", d.mode).to_lowercase());
        s.num("decay.rate", d.rate);
        s.num("decay.amplitude", d.amplitude);
        s.num("decay.r_squared", d.r_squared);
    }
    s.text("monitor.violations", monitor.violations.len());
    match monitor.entered_exterior {
        Some(t) => s.num("monitor.entered_exterior", t),
        None => s.text("monitor.entered_exterior", "none"),
    }
    s.num("monitor.min_nehari_ratio", monitor.min_nehari_ratio);
    if let Some(m) = monitor.coercivity_margin {
        s.num("monitor.coercivity_margin", m);
    }
    s.text("monitor.equivalence", equivalence.as_str());
    if let Ok(eta) = subcritical_eta_range(model.p, model.m) {
        s.num("subcritical.eta_max", eta);
    }
    if model.p > model.m && model.alpha > 0.0 && constants.c1 > 0.0 {
        if let Ok(hec) = high_energy_constants(model, constants) {
            s.num("high_energy.m0", hec.m0);
            s.num("high_energy.root", hec.m);
            s.num("high_energy.threshold_factor", hec.threshold_factor);
            let passes = high_energy_blowup_check(&u0, &u1, model, &hec)?;
            s.text("high_energy.passes", passes);
            if passes {
                match lifespan_bound(&u0, &u1, model, constants, 1.0) {
                    Ok(b) => {
                        s.num("lifespan.t_upper", b.t_upper);
                        s.num("lifespan.t_upper_printed", b.t_upper_printed);
                        s.num("lifespan.eps2", b.eps2);
                        s.num("lifespan.m1", b.m1);
                        s.num("lifespan.m2", b.m2);
                    }
                    Err(e) => s.text("lifespan.status", e),
                }
            }
        }
    }
    Ok(RunOutcome {
        classification,
        trajectory,
        u0,
        u1,
        e0,
        scheme,
        decay,
        monitor,
        equivalence,
        summary: s,
    })
}

/// Grid, model and well constants as summary entries.
pub fn constants_summary(config: &RunConfig, setup: &Setup) -> Summary {
    let c = &setup.constants;
    let g = &config.grid;
    let mut s = Summary::new();
    s.text("prng", rng::PRNG_ID);
    s.text("seed", config.init.seed);
    s.text("grid.n", g.n);
    s.text("grid.ns", g.ns);
    s.text("grid.nx", g.nx);
    s.num("grid.s_min", g.s_min);
    s.num("model.p", setup.model.p);
    s.num("model.m", setup.model.m);
    s.num("model.gamma", setup.model.gamma);
    s.text("model.potential", setup.model.potential.name());
    s.num("model.alpha", setup.model.alpha);
    s.num("model.beta", setup.model.beta);
    s.num("lambda1", c.lambda1);
    s.num("c_star_embedding", c.c_star_emb);
    s.num("c_star_hardy", c.c_star_hardy);
    s.num("c1", c.c1);
    s.num("c2", c.c2);
    s.num("d", c.d);
    if let Some(ds) = setup.sampled_depth {
        s.num("d_sampled", ds);
    }
    s.text("embedding_converged", c.embedding_converged);
    s
}

/// Writes `series.csv` and `summary.txt` into `dir`.
pub fn write_run(outcome: &RunOutcome, dir: &Path) -> Result<()> {
    write_file(dir, "series.csv", &series_csv(&outcome.trajectory.series))?;
    write_file(dir, "summary.txt", &outcome.summary.render())
}

