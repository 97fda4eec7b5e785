//! Parameter sweeps producing a phase table.

use std::path::Path;

use rayon::prelude::*;

use crate::diagnostics::monitor::Equivalence;
use crate::error::{Error, Result};
use crate::harness::config::{ConfigError, ConfigErrors, SweepAxis, SweepConfig};
use crate::harness::output::{fmt_f64, write_file};
use crate::harness::run::{run_with, setup, Classification, RunOutcome, Setup};

/// One row of the phase table.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub value: f64,
    pub e0: f64,
    pub d: f64,
    pub classification: Classification,
    pub blowup_time: Option<f64>,
    pub decay_rate: Option<f64>,
    /// First time with `E < d` and label `V`.
    pub entered_exterior: Option<f64>,
    pub equivalence: Equivalence,
    pub violations: usize,
}

impl SweepRow {
    fn from_outcome(value: f64, d: f64, o: &RunOutcome) -> Self {
        Self {
            value,
            e0: o.e0,
            d,
            classification: o.classification,
            blowup_time: o.blowup_time(),
            decay_rate: o.decay.as_ref().map(|r| r.rate),
            entered_exterior: o.monitor.entered_exterior,
            equivalence: o.equivalence,
            violations: o.monitor.violations.len(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub axis: SweepAxis,
    pub rows: Vec<SweepRow>,
}

pub const PHASE_HEADER: &str =
    "value,E0,E0_over_d,classification,blowup_time,decay_rate,entered_V,threshold_consistent,violations";

/// Runs every axis value, at most `workers` at a time, keeping the input order.
pub fn sweep(config: &SweepConfig) -> Result<SweepResult> {
    let mut errors = Vec::new();
    for &v in &config.values {
        for (key, message) in config.base.with_axis(config.axis, v).violations() {
            errors.push(ConfigError {
                line: None,
                key,
                message: format!("at {} = {v}: {message}", config.axis.as_str()),
            });
        }
    }
    if !errors.is_empty() {
        return Err(ConfigErrors(errors).into());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers.max(1))
        .build()
        .map_err(|e| Error::InvalidArgument(format!("cannot start worker pool: {e}")))?;
    let shared: Option<Setup> = match config.axis {
        SweepAxis::Amplitude | SweepAxis::M => Some(setup(&config.base)?),
        SweepAxis::Gamma | SweepAxis::P => None,
    };
    let rows = pool.install(|| {
        config
            .values
            .par_iter()
            .map(|&v| {
                let child = config.base.with_axis(config.axis, v);
                let own;
                let s = match (&shared, config.axis) {
                    (Some(s), SweepAxis::M) => {
                        own = s.with_damping_exponent(v);
                        &own
                    }
                    (Some(s), _) => s,
                    (None, _) => {
                        own = setup(&child)?;
                        &own
                    }
                };
                let outcome = run_with(&child, s)?;
                Ok(SweepRow::from_outcome(v, s.constants.d, &outcome))
            })
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(SweepResult {
        axis: config.axis,
        rows,
    })
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "none".to_string(), fmt_f64)
}

pub fn phase_table(result: &SweepResult) -> String {
    let mut out = String::from(PHASE_HEADER);
    out.push('\n');
    for r in &result.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            fmt_f64(r.value),
            fmt_f64(r.e0),
            fmt_f64(r.e0 / r.d),
            r.classification.as_str(),
            opt(r.blowup_time),
            opt(r.decay_rate),
            opt(r.entered_exterior),
            r.equivalence.as_str(),
            r.violations
        ));
    }
    out
}

/// Writes `phase.csv` into `dir`.
pub fn write_sweep(result: &SweepResult, dir: &Path) -> Result<()> {
    write_file(dir, "phase.csv", &phase_table(result))
}
