//! Invariant-set monitoring along recorded trajectories.

use crate::diagnostics::EnergySeries;
use crate::variational::{gradient_threshold, theta_from, ModelParams, WellConstants, WellLabel};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InvariantRule {
    /// Below the well depth the well `W` is invariant.
    StaysInWell,
    /// Below the well depth the exterior `V` is invariant.
    StaysOutside,
    /// Nonpositive energy (with `u ≠ 0`) forces the exterior `V`.
    NonpositiveEnergy,
    /// Inside the well, `I(u) >= θ ‖∇_B u‖²`.
    NehariCoercivity,
    /// Inside `V`, `‖∇_B u‖` exceeds the gradient threshold.
    GradientGap,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub rule: InvariantRule,
    /// Record index where the rule became active.
    pub entry: usize,
    /// Record index of the violation.
    pub index: usize,
    pub t: f64,
    pub label: WellLabel,
    /// `E - d` at the violating record.
    pub energy_margin: f64,
    pub nehari: f64,
    /// Amount by which the inequality fails (positive).
    pub shortfall: f64,
}

#[derive(Debug, Clone, Default)]
pub struct MonitorReport {
    pub violations: Vec<Violation>,
    /// `θ` when the data start in the well below the depth.
    pub theta: Option<f64>,
    /// Smallest `(I - θ‖∇u‖²)/‖∇u‖²` over the records, when `θ` applies.
    pub coercivity_margin: Option<f64>,
    /// First time with `E < d` and label `V`.
    pub entered_exterior: Option<f64>,
    /// `min |I| / (|a| + |b|)` over records with `u ≠ 0`.
    pub min_nehari_ratio: f64,
}

impl MonitorReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn count(&self, rule: InvariantRule) -> usize {
        self.violations.iter().filter(|v| v.rule == rule).count()
    }
}

/// Relative slack for inequalities evaluated in floating point.
const SLACK: f64 = 1e-9;

pub fn invariant_set_monitor(series: &EnergySeries, constants: &WellConstants, p: f64) -> MonitorReport {
    let d = constants.d;
    let rows = series.rows();
    let mut report = MonitorReport {
        min_nehari_ratio: f64::INFINITY,
        ..Default::default()
    };
    let mut well_entry: Option<usize> = None;
    let mut exterior_entry: Option<usize> = None;
    let mut negative_entry: Option<usize> = None;
    let threshold = gradient_threshold(constants, p);
    if let Some(first) = rows.first() {
        if first.e < d && first.label == WellLabel::InsideW && first.e >= 0.0 {
            if let Ok(theta) = theta_from(first.e, constants.c_star_emb, constants.c1, d, p) {
                report.theta = Some(theta);
            }
        }
    }
    let violation = |rule, entry, index: usize, shortfall| {
        let r = &rows[index];
        Violation {
            rule,
            entry,
            index,
            t: r.t,
            label: r.label,
            energy_margin: r.e - d,
            nehari: r.i,
            shortfall,
        }
    };
    for (k, r) in rows.iter().enumerate() {
        if r.label != WellLabel::Zero {
            let scale = r.a.abs() + r.b.abs();
            if scale > 0.0 {
                report.min_nehari_ratio = report.min_nehari_ratio.min(r.i.abs() / scale);
            }
        }
        if let Some(entry) = well_entry {
            if !r.label.in_well() {
                report
                    .violations
                    .push(violation(InvariantRule::StaysInWell, entry, k, d - r.e));
            }
        }
        if let Some(entry) = exterior_entry.or(negative_entry) {
            if r.label != WellLabel::InsideV {
                let rule = if exterior_entry.is_some() {
                    InvariantRule::StaysOutside
                } else {
                    InvariantRule::NonpositiveEnergy
                };
                report.violations.push(violation(rule, entry, k, r.i));
            }
        }
        if r.label == WellLabel::InsideV {
            let grad = r.grad_sq.sqrt();
            if grad <= threshold * (1.0 - SLACK) {
                report
                    .violations
                    .push(violation(InvariantRule::GradientGap, k, k, threshold - grad));
            }
        }
        if let (Some(theta), true) = (report.theta, r.grad_sq > 0.0) {
            let margin = r.i - theta * r.grad_sq;
            let relative = margin / r.grad_sq;
            report.coercivity_margin =
                Some(report.coercivity_margin.map_or(relative, |m| m.min(relative)));
            if margin < -SLACK * (r.i.abs() + r.grad_sq) {
                report
                    .violations
                    .push(violation(InvariantRule::NehariCoercivity, 0, k, -margin));
            }
        }
        // activate rules after checking the current record
        if well_entry.is_none() && r.e < d && r.label.in_well() {
            well_entry = Some(k);
        }
        let at_depth = (r.e - d).abs() <= 1e-12 * d.abs() && r.pairing > 0.0;
        if exterior_entry.is_none() && (r.e < d || at_depth) && r.label == WellLabel::InsideV {
            exterior_entry = Some(k);
        }
        if report.entered_exterior.is_none() && r.e < d && r.label == WellLabel::InsideV {
            report.entered_exterior = Some(r.t);
        }
        if negative_entry.is_none() && (r.e < 0.0 || (r.e == 0.0 && r.label != WellLabel::Zero)) {
            negative_entry = Some(k);
            if r.label != WellLabel::InsideV {
                report
                    .violations
                    .push(violation(InvariantRule::NonpositiveEnergy, k, k, r.i));
            }
        }
    }
    report
}

/// Agreement between blow-up and entry into `{E < d} ∩ V`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Equivalence {
    Consistent,
    Mismatch,
    /// Some record sits within the Nehari boundary band.
    Unresolved,
    /// The model is outside the range where the equivalence holds.
    NotApplicable,
}

impl Equivalence {
    /// Column value in phase tables.
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Consistent => "true",
            Self::Mismatch => "false",
            Self::Unresolved => "unresolved",
            Self::NotApplicable => "n/a",
        }
    }
}

/// Width of the band around the Nehari manifold excluded from the
/// blow-up/exterior equivalence.
pub const BOUNDARY_BAND: f64 = 1e-3;

/// The equivalence needs `p > m >= 2`, `2 < p < 2 + 4/n` and
/// `0 <= γ < 1/C*²`.
pub fn equivalence_applies(model: &ModelParams, constants: &WellConstants) -> bool {
    let n = model.n as f64;
    model.p > model.m
        && model.p < 2.0 + 4.0 / n
        && model.gamma >= 0.0
        && model.gamma * constants.c_star_hardy.powi(2) < 1.0
}

pub fn blowup_equivalence(report: &MonitorReport, blew_up: bool, applies: bool) -> Equivalence {
    if !applies {
        Equivalence::NotApplicable
    } else if report.min_nehari_ratio < BOUNDARY_BAND {
        Equivalence::Unresolved
    } else if blew_up == report.entered_exterior.is_some() {
        Equivalence::Consistent
    } else {
        Equivalence::Mismatch
    }
}
