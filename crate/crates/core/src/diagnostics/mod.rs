//! Trajectory analyses: energy series, decay fits, blow-up detection and the
//! explicit blow-up thresholds and time bounds.

pub mod blowup;
pub mod decay;
pub mod high_energy;
pub mod monitor;

use crate::geometry::power_sum;
use crate::integrator::SimState;
use crate::variational::{classify_parts, parts_raw, ModelParams, WellLabel};

/// One recorded instant of a trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesRow {
    pub t: f64,
    /// Total energy `E`.
    pub e: f64,
    pub j: f64,
    pub i: f64,
    /// `‖u‖_2`
    pub l2: f64,
    /// `‖g^{1/p} u‖_p`
    pub lp_g: f64,
    pub damping_integral: f64,
    pub label: WellLabel,
    /// `‖∇_B u‖²`
    pub grad_sq: f64,
    /// `a = ‖∇_B u‖² - γ‖V^{1/2}u‖²`
    pub a: f64,
    /// `b = ‖g^{1/p} u‖_p^p`
    pub b: f64,
    /// `‖u_t‖²`
    pub kinetic: f64,
    /// `(u, u_t)`
    pub pairing: f64,
}

impl SeriesRow {
    /// Measures every column at `state`; labels use the well depth `depth`.
    pub fn measure(state: &SimState, model: &ModelParams, depth: f64) -> Self {
        let w = state.grid().weight();
        let parts = parts_raw(model, state.u.values());
        let kinetic = power_sum(state.v.values(), 2.0, w);
        let j = parts.j(model.p);
        let pairing = w * crate::geometry::dot(state.u.values(), state.v.values());
        Self {
            t: state.t,
            e: 0.5 * kinetic + j,
            j,
            i: parts.i(),
            l2: power_sum(state.u.values(), 2.0, w).sqrt(),
            lp_g: parts.source.powf(1.0 / model.p),
            damping_integral: state.damping_integral,
            label: classify_parts(&parts, model.p, depth),
            grad_sq: parts.grad_sq,
            a: parts.a,
            b: parts.source,
            kinetic,
            pairing,
        }
    }
}

/// Time series of energies and norms along a trajectory.
#[derive(Debug, Clone, Default)]
pub struct EnergySeries {
    rows: Vec<SeriesRow>,
    /// Time at which the integrator stopped on blow-up, if it did.
    pub blowup_time: Option<f64>,
}

impl EnergySeries {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_rows(rows: Vec<SeriesRow>) -> Self {
        Self {
            rows,
            blowup_time: None,
        }
    }

    pub fn push(&mut self, row: SeriesRow) {
        self.rows.push(row);
    }

    pub fn rows(&self) -> &[SeriesRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn times(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.t).collect()
    }

    pub fn energies(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.e).collect()
    }

    /// Checks that `t` is strictly increasing and the damping integral never
    /// decreases.
    pub fn is_well_ordered(&self) -> bool {
        self.rows.windows(2).all(|w| {
            w[1].t > w[0].t && w[1].damping_integral >= w[0].damping_integral
        })
    }

    /// Relabels every row against a new well depth.
    pub fn relabel(&mut self, p: f64, depth: f64) {
        for r in &mut self.rows {
            let parts = crate::variational::EnergyParts {
                grad_sq: r.grad_sq,
                potential_sq: 0.0,
                source: r.b,
                a: r.a,
            };
            r.label = classify_parts(&parts, p, depth);
        }
    }
}
