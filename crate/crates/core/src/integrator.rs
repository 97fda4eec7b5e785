//! Time stepping for `u_tt - Δ_B u - γVu + |u_t|^{m-2}u_t = g|u|^{p-2}u`.
//!
//! The default step is a Strang splitting: half a step of the exact damping
//! flow `v' = -|v|^{m-2} v`, a kick-drift-kick Störmer–Verlet step for the
//! conservative part, and another half damping step. The damping flow is
//! solved in closed form, so the energy it removes is accounted exactly and
//! the energy-identity residual is second order in `dt`.

use std::sync::Arc;

use crate::diagnostics::{EnergySeries, SeriesRow};
use crate::error::{Error, Result};
use crate::geometry::{power_sum, ConeGrid, Field};
use crate::operators::{dirichlet_form, laplacian_into};
use crate::variational::ModelParams;

/// How the damping term enters a step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DampingScheme {
    /// Strang splitting around Verlet with the exact damping flow.
    ExactFlow,
    /// Lie splitting: Verlet then one backward-Euler damping solve per node.
    ImplicitEuler,
}

impl DampingScheme {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::ExactFlow => "exact-flow",
            Self::ImplicitEuler => "implicit-euler",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SchemeParams {
    pub dt: f64,
    /// Fraction of the linear stability limit allowed for `dt`.
    pub cfl_safety: f64,
    /// Ceiling on `‖u‖_2`; crossing it is reported as blow-up.
    pub blowup_cap: f64,
    /// Relative tolerance of the nodal backward-Euler damping solve.
    pub newton_tol: f64,
    pub t_max: f64,
    pub damping: DampingScheme,
    /// Disable the source-driven step reduction near blow-up.
    pub fixed_step: bool,
}

impl SchemeParams {
    /// Largest stable step `cfl_safety · 2/√λ_max` for the grid.
    pub fn stable_dt(grid: &ConeGrid, cfl_safety: f64) -> f64 {
        cfl_safety * 2.0 / grid.laplacian_bound().sqrt()
    }

    /// Defaults with the step set to the stability limit.
    pub fn for_grid(grid: &ConeGrid, t_max: f64) -> Self {
        let cfl_safety = 0.5;
        Self {
            dt: Self::stable_dt(grid, cfl_safety),
            cfl_safety,
            blowup_cap: 1e6,
            newton_tol: 1e-14,
            t_max,
            damping: DampingScheme::ExactFlow,
            fixed_step: false,
        }
    }

    pub fn with_dt(mut self, dt: f64) -> Self {
        self.dt = dt;
        self
    }

    pub fn with_cap(mut self, cap: f64) -> Self {
        self.blowup_cap = cap;
        self
    }

    pub fn validate(&self, grid: &ConeGrid) -> Result<()> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::InvalidArgument(format!("dt = {} must be positive", self.dt)));
        }
        if !(self.cfl_safety > 0.0 && self.cfl_safety <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "cfl_safety = {} must lie in (0, 1]",
                self.cfl_safety
            )));
        }
        let limit = Self::stable_dt(grid, self.cfl_safety);
        if self.dt > limit * (1.0 + 1e-12) {
            return Err(Error::InvalidArgument(format!(
                "dt = {} exceeds the stability limit {limit}",
                self.dt
            )));
        }
        if !(self.blowup_cap > 0.0) {
            return Err(Error::InvalidArgument("blowup_cap must be positive".into()));
        }
        if !(self.newton_tol > 0.0) {
            return Err(Error::InvalidArgument("newton_tol must be positive".into()));
        }
        if !(self.t_max >= 0.0) || !self.t_max.is_finite() {
            return Err(Error::InvalidArgument("t_max must be finite and nonnegative".into()));
        }
        Ok(())
    }

    /// Smallest step the blow-up refinement may take.
    pub fn dt_min(&self) -> f64 {
        self.dt / 1024.0
    }
}

/// Default blow-up ceiling: `1e6` times the size of the data.
pub fn default_blowup_cap(u0: &Field, u1: &Field) -> f64 {
    let w = u0.grid().weight();
    let scale = power_sum(u0.values(), 2.0, w)
        .sqrt()
        .max(power_sum(u1.values(), 2.0, w).sqrt());
    1e6 * if scale > 0.0 { scale.max(1e-3) } else { 1.0 }
}

#[derive(Debug, Clone)]
pub struct SimState {
    pub t: f64,
    pub u: Field,
    pub v: Field,
    /// `∫_0^t ‖u_τ‖_m^m dτ`
    pub damping_integral: f64,
}

impl SimState {
    pub fn new(u0: Field, u1: Field) -> Result<Self> {
        u0.check_grid(&u1)?;
        Ok(Self {
            t: 0.0,
            u: u0,
            v: u1,
            damping_integral: 0.0,
        })
    }

    pub fn grid(&self) -> &Arc<ConeGrid> {
        self.u.grid()
    }

    pub fn l2(&self) -> f64 {
        power_sum(self.u.values(), 2.0, self.grid().weight()).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.u.is_finite() && self.v.is_finite() && self.damping_integral.is_finite()
    }
}

/// A step produced non-finite values; `last` is the state before it.
#[derive(Debug, Clone)]
pub struct NonFinite {
    pub last: Box<SimState>,
}

/// Precomputed pieces of the right-hand side.
#[derive(Debug, Clone)]
pub struct Dynamics {
    gamma_v: Vec<f64>,
    g: Vec<f64>,
    p: f64,
    m: f64,
    beta: f64,
    grid: Arc<ConeGrid>,
}

impl Dynamics {
    pub fn new(model: &ModelParams) -> Self {
        Self {
            gamma_v: model.v.values().iter().map(|v| model.gamma * v).collect(),
            g: model.g.values().to_vec(),
            p: model.p,
            m: model.m,
            beta: model.beta,
            grid: model.grid().clone(),
        }
    }

    /// `out = Δ_B u + γVu + g|u|^{p-2}u`
    pub fn force(&self, u: &[f64], out: &mut [f64]) {
        laplacian_into(&self.grid, u, out);
        let p = self.p;
        for (((o, &x), gv), g) in out.iter_mut().zip(u).zip(&self.gamma_v).zip(&self.g) {
            *o += gv * x + g * signed_power(x, p - 1.0);
        }
    }

    /// Step bound from the linearized source frequency `√((p-1) β ‖u‖_∞^{p-2})`.
    fn source_dt(&self, u: &[f64]) -> f64 {
        let umax = max_abs(u);
        let omega2 = (self.p - 1.0) * self.beta * umax.powf(self.p - 2.0);
        if omega2 > 0.0 {
            0.2 / omega2.sqrt()
        } else {
            f64::INFINITY
        }
    }

    /// Step bound from the damping relaxation time `1/((m-1)|v|^{m-2})`,
    /// with `|v|` at least the speed at which damping balances the source.
    /// Without it the splitting lets the kick overshoot an overdamped velocity.
    fn damping_dt(&self, u: &[f64], v: &[f64]) -> f64 {
        if self.m == 2.0 {
            return f64::INFINITY;
        }
        let balance = (self.beta * max_abs(u).powf(self.p - 1.0)).powf(1.0 / (self.m - 1.0));
        let speed = max_abs(v).max(balance);
        let rate = (self.m - 1.0) * speed.powf(self.m - 2.0);
        if rate > 0.0 {
            0.2 / rate
        } else {
            f64::INFINITY
        }
    }
}

fn max_abs(x: &[f64]) -> f64 {
    x.iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

/// `sign(x)|x|^e` with fast paths for small integer exponents.
#[inline]
pub(crate) fn signed_power(x: f64, e: f64) -> f64 {
    if e == 1.0 {
        x
    } else if e == 2.0 {
        x * x.abs()
    } else if e == 3.0 {
        x * x * x
    } else {
        x.signum() * x.abs().powf(e)
    }
}

/// Root of `v + dt |v|^{m-2} v = v_pred` by safeguarded Newton.
pub fn damping_solve(v_pred: f64, dt: f64, m: f64) -> f64 {
    damping_solve_tol(v_pred, dt, m, 1e-14)
}

pub fn damping_solve_tol(v_pred: f64, dt: f64, m: f64, tol: f64) -> f64 {
    if v_pred == 0.0 {
        return 0.0;
    }
    if m == 2.0 {
        return v_pred / (1.0 + dt);
    }
    let target = v_pred.abs();
    if m == 3.0 {
        // v + dt v² = target
        return v_pred.signum() * 2.0 * target / (1.0 + (1.0 + 4.0 * dt * target).sqrt());
    }
    let f = |w: f64| w + dt * w.powf(m - 1.0) - target;
    let (mut lo, mut hi) = (0.0, target);
    let mut w = if target < 1e-12 { 0.5 * target } else { target };
    for _ in 0..200 {
        let fw = f(w);
        if fw.abs() <= tol * target {
            break;
        }
        if fw > 0.0 {
            hi = w;
        } else {
            lo = w;
        }
        let slope = 1.0 + dt * (m - 1.0) * w.powf(m - 2.0);
        let mut next = w - fw / slope;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - w).abs() <= tol * target {
            w = next;
            break;
        }
        w = next;
    }
    v_pred.signum() * w
}

/// Exact solution of `v' = -|v|^{m-2} v` after time `h`.
#[inline]
pub fn damping_flow(v: f64, h: f64, m: f64) -> f64 {
    if m == 2.0 {
        v * (-h).exp()
    } else if v == 0.0 {
        0.0
    } else {
        let a = v.abs();
        v * (1.0 + (m - 2.0) * h * a.powf(m - 2.0)).powf(-1.0 / (m - 2.0))
    }
}

/// Advances `state` by `dt` in place. On non-finite output the state is left
/// untouched and the error carries a copy of it.
pub fn step_in_place(
    state: &mut SimState,
    dt: f64,
    dynamics: &Dynamics,
    scheme: &SchemeParams,
    scratch: &mut Vec<f64>,
) -> std::result::Result<(), NonFinite> {
    let backup = state.clone();
    let w = state.grid().weight();
    let m = dynamics.m;
    let n = state.u.len();
    scratch.resize(n, 0.0);
    let mut dissipated = 0.0;
    if scheme.damping == DampingScheme::ExactFlow {
        dissipated += damp_exact(state.v.values_mut(), 0.5 * dt, m, w);
    }
    let mut v_start_norm = 0.0;
    if scheme.damping == DampingScheme::ImplicitEuler {
        v_start_norm = power_sum(state.v.values(), m, w);
    }
    // kick-drift-kick
    dynamics.force(state.u.values(), scratch);
    for (v, f) in state.v.values_mut().iter_mut().zip(scratch.iter()) {
        *v += 0.5 * dt * f;
    }
    for (u, v) in state.u.values_mut().iter_mut().zip(state.v.values()) {
        *u += dt * v;
    }
    dynamics.force(state.u.values(), scratch);
    for (v, f) in state.v.values_mut().iter_mut().zip(scratch.iter()) {
        *v += 0.5 * dt * f;
    }
    match scheme.damping {
        DampingScheme::ExactFlow => {
            dissipated += damp_exact(state.v.values_mut(), 0.5 * dt, m, w);
        }
        DampingScheme::ImplicitEuler => {
            for v in state.v.values_mut() {
                *v = damping_solve_tol(*v, dt, m, scheme.newton_tol);
            }
            let v_end_norm = power_sum(state.v.values(), m, w);
            dissipated += 0.5 * dt * (v_start_norm + v_end_norm);
        }
    }
    state.t += dt;
    state.damping_integral += dissipated;
    if state.is_finite() {
        Ok(())
    } else {
        *state = backup.clone();
        Err(NonFinite {
            last: Box::new(backup),
        })
    }
}

/// Applies the exact damping flow for time `h`; returns the energy removed,
/// which equals `∫ ‖v‖_m^m` over the sub-step.
fn damp_exact(v: &mut [f64], h: f64, m: f64, w: f64) -> f64 {
    let mut removed = 0.0;
    for x in v.iter_mut() {
        let old = *x;
        let new = damping_flow(old, h, m);
        removed += 0.5 * (old * old - new * new);
        *x = new;
    }
    w * removed
}

/// One step of size `scheme.dt` returning the new state.
pub fn step(
    state: &SimState,
    scheme: &SchemeParams,
    model: &ModelParams,
) -> std::result::Result<SimState, NonFinite> {
    let dynamics = Dynamics::new(model);
    let mut next = state.clone();
    let mut scratch = Vec::new();
    step_in_place(&mut next, scheme.dt, &dynamics, scheme, &mut scratch)?;
    Ok(next)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlowupReason {
    /// `‖u‖_2` exceeded the cap.
    CapExceeded,
    /// The step produced NaN or infinity.
    NonFinite,
}

#[derive(Debug, Clone)]
pub struct BlowupEvent {
    pub t: f64,
    pub l2: f64,
    pub reason: BlowupReason,
}

/// A finished simulation.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub series: EnergySeries,
    pub final_state: SimState,
    pub blowup: Option<BlowupEvent>,
    pub steps: usize,
}

/// Options that only affect what is recorded.
#[derive(Debug, Clone, Copy)]
pub struct RecordOptions {
    /// Record every this many steps (the first and last states are always kept).
    pub every: usize,
    /// Well depth used for the labels; `f64::INFINITY` disables `AboveD`.
    pub depth: f64,
}

impl Default for RecordOptions {
    fn default() -> Self {
        Self {
            every: 1,
            depth: f64::INFINITY,
        }
    }
}

/// Integrates from `(u0, u1)` up to `scheme.t_max` or blow-up.
pub fn integrate(
    model: &ModelParams,
    scheme: &SchemeParams,
    u0: &Field,
    u1: &Field,
    record: RecordOptions,
) -> Result<Trajectory> {
    integrate_with(model, scheme, u0, u1, record, |_| {})
}

/// As [`integrate`], calling `observe` after every accepted step.
pub fn integrate_with(
    model: &ModelParams,
    scheme: &SchemeParams,
    u0: &Field,
    u1: &Field,
    record: RecordOptions,
    mut observe: impl FnMut(&SimState),
) -> Result<Trajectory> {
    let grid = model.grid();
    scheme.validate(grid)?;
    if !crate::geometry::same_grid(u0.grid(), grid) {
        return Err(Error::GridMismatch);
    }
    let mut state = SimState::new(u0.clone(), u1.clone())?;
    let dynamics = Dynamics::new(model);
    let every = record.every.max(1);
    let mut series = EnergySeries::new();
    series.push(SeriesRow::measure(&state, model, record.depth));
    let mut scratch = Vec::new();
    let mut steps = 0usize;
    let mut blowup = None;
    let mut last_recorded = 0usize;
    let end = scheme.t_max;
    while state.t < end - 1e-12 * end.max(1.0) {
        let mut dt = scheme.dt;
        if !scheme.fixed_step {
            let (u, v) = (state.u.values(), state.v.values());
            dt = dt
                .min(dynamics.source_dt(u))
                .min(dynamics.damping_dt(u, v))
                .max(scheme.dt_min());
        }
        dt = dt.min(end - state.t);
        match step_in_place(&mut state, dt, &dynamics, scheme, &mut scratch) {
            Ok(()) => {}
            Err(_) => {
                blowup = Some(BlowupEvent {
                    t: state.t,
                    l2: state.l2(),
                    reason: BlowupReason::NonFinite,
                });
                break;
            }
        }
        steps += 1;
        observe(&state);
        let l2 = state.l2();
        if l2 > scheme.blowup_cap {
            blowup = Some(BlowupEvent {
                t: state.t,
                l2,
                reason: BlowupReason::CapExceeded,
            });
            series.push(SeriesRow::measure(&state, model, record.depth));
            last_recorded = steps;
            break;
        }
        if steps.is_multiple_of(every) {
            series.push(SeriesRow::measure(&state, model, record.depth));
            last_recorded = steps;
        }
    }
    if last_recorded != steps && blowup.is_none() {
        series.push(SeriesRow::measure(&state, model, record.depth));
    }
    series.blowup_time = blowup.as_ref().map(|b| b.t);
    Ok(Trajectory {
        series,
        final_state: state,
        blowup,
        steps,
    })
}

/// `r(t_k) = E(t_k) + ∫_0^{t_k} ‖u_t‖_m^m - E(0)` along a series.
pub fn energy_balance_residual(series: &EnergySeries) -> Vec<f64> {
    let Some(first) = series.rows().first() else {
        return Vec::new();
    };
    let e0 = first.e;
    series
        .rows()
        .iter()
        .map(|r| r.e + r.damping_integral - e0)
        .collect()
}

/// Gap between two trajectories in the energy space norm
/// `(‖v_a - v_b‖² + ‖∇(u_a - u_b)‖² - γ‖V^{1/2}(u_a - u_b)‖²)^{1/2}`.
pub fn energy_space_gap(a: &SimState, b: &SimState, model: &ModelParams) -> f64 {
    let grid = model.grid();
    let w = grid.weight();
    let du: Vec<f64> = a.u.values().iter().zip(b.u.values()).map(|(x, y)| x - y).collect();
    let dv: Vec<f64> = a.v.values().iter().zip(b.v.values()).map(|(x, y)| x - y).collect();
    let kinetic = power_sum(&dv, 2.0, w);
    let grad = dirichlet_form(grid, &du);
    let pot: f64 = w * du
        .iter()
        .zip(model.v.values())
        .map(|(x, v)| v * x * x)
        .sum::<f64>();
    (kinetic + grad - model.gamma * pot).max(0.0).sqrt()
}

/// Measured growth of the gap between two nearby trajectories.
#[derive(Debug, Clone)]
pub struct DependenceReport {
    pub times: Vec<f64>,
    pub gaps: Vec<f64>,
    /// Least-squares slope of `ln gap` against `t`.
    pub slope: f64,
    /// Smallest `C0` with `gap(t) <= e^{C0 t} gap(0)` on every record.
    pub envelope_rate: f64,
}

#[derive(Debug, Clone)]
pub enum DependenceProbe {
    /// The two data sets coincide: the gap is identically zero.
    Degenerate,
    Measured(DependenceReport),
}

/// Runs both data sets in lockstep with a common fixed step up to `t_end`.
#[allow(clippy::too_many_arguments)]
pub fn continuous_dependence_probe(
    u0a: &Field,
    u1a: &Field,
    u0b: &Field,
    u1b: &Field,
    scheme: &SchemeParams,
    model: &ModelParams,
    t_end: f64,
) -> Result<DependenceProbe> {
    scheme.validate(model.grid())?;
    let mut a = SimState::new(u0a.clone(), u1a.clone())?;
    let mut b = SimState::new(u0b.clone(), u1b.clone())?;
    a.u.check_grid(&b.u)?;
    let gap0 = energy_space_gap(&a, &b, model);
    if gap0 == 0.0 {
        return Ok(DependenceProbe::Degenerate);
    }
    let dynamics = Dynamics::new(model);
    let mut scratch = Vec::new();
    let mut times = vec![0.0];
    let mut gaps = vec![gap0];
    let nsteps = (t_end / scheme.dt).ceil().max(1.0) as usize;
    let dt = t_end / nsteps as f64;
    for _ in 0..nsteps {
        for s in [&mut a, &mut b] {
            step_in_place(s, dt, &dynamics, scheme, &mut scratch)
                .map_err(|e| Error::NumericalBlowup { t: e.last.t })?;
            if s.l2() > scheme.blowup_cap {
                return Err(Error::NumericalBlowup { t: s.t });
            }
        }
        times.push(a.t);
        gaps.push(energy_space_gap(&a, &b, model));
    }
    let logs: Vec<f64> = gaps.iter().map(|g| g.max(f64::MIN_POSITIVE).ln()).collect();
    let slope = crate::diagnostics::decay::least_squares(&times, &logs).slope;
    let envelope_rate = times
        .iter()
        .zip(&gaps)
        .skip(1)
        .map(|(t, g)| (g / gap0).ln() / t)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(DependenceProbe::Measured(DependenceReport {
        times,
        gaps,
        slope,
        envelope_rate,
    }))
}
