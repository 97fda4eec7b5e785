//! Energy decay fits and Nakao's difference inequality.

use crate::diagnostics::EnergySeries;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Ordinary least squares `y ≈ slope x + intercept`.
pub fn least_squares(x: &[f64], y: &[f64]) -> LineFit {
    let n = x.len().min(y.len()) as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxx += (a - mx) * (a - mx);
        sxy += (a - mx) * (b - my);
        syy += (b - my) * (b - my);
    }
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let r_squared = if syy > 0.0 && sxx > 0.0 {
        (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0)
    } else {
        1.0
    };
    LineFit {
        slope,
        intercept: my - slope * mx,
        r_squared,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecayMode {
    /// `E ≈ K e^{-κ t}`
    Exponential,
    /// `E ≈ K (1+t)^{slope}`
    Algebraic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecayReport {
    pub mode: DecayMode,
    /// `κ` for exponential decay; the fitted log-log slope for algebraic decay.
    pub rate: f64,
    pub amplitude: f64,
    pub fit_window: (f64, f64),
    pub r_squared: f64,
}

/// Samples below this energy are treated as exhausted.
pub const ENERGY_FLOOR: f64 = 1e-12;
pub const MIN_FIT_SAMPLES: usize = 10;

/// Fits the decay of `E(t)` over the last half of the samples with
/// `E > 1e-12`: `ln E` against `t` when `m = 2`, against `ln(1+t)` when `m > 2`.
pub fn fit_decay(series: &EnergySeries, m: f64) -> Result<DecayReport> {
    let positive: Vec<(f64, f64)> = series
        .rows()
        .iter()
        .filter(|r| r.e > ENERGY_FLOOR)
        .map(|r| (r.t, r.e))
        .collect();
    let tail = &positive[positive.len() / 2..];
    if tail.len() < MIN_FIT_SAMPLES {
        return Err(Error::InvalidArgument(format!(
            "decay fit window has {} samples, need at least {MIN_FIT_SAMPLES}",
            tail.len()
        )));
    }
    let ln_e: Vec<f64> = tail.iter().map(|(_, e)| e.ln()).collect();
    let window = (tail[0].0, tail[tail.len() - 1].0);
    if m == 2.0 {
        let t: Vec<f64> = tail.iter().map(|(t, _)| *t).collect();
        let fit = least_squares(&t, &ln_e);
        Ok(DecayReport {
            mode: DecayMode::Exponential,
            rate: -fit.slope,
            amplitude: fit.intercept.exp(),
            fit_window: window,
            r_squared: fit.r_squared,
        })
    } else {
        let lt: Vec<f64> = tail.iter().map(|(t, _)| (1.0 + t).ln()).collect();
        let fit = least_squares(&lt, &ln_e);
        Ok(DecayReport {
            mode: DecayMode::Algebraic,
            rate: fit.slope,
            amplitude: fit.intercept.exp(),
            fit_window: window,
            r_squared: fit.r_squared,
        })
    }
}

/// Algebraic decay exponent expected for damping exponent `m > 2`.
pub fn expected_algebraic_slope(m: f64) -> f64 {
    -2.0 / (m - 2.0)
}

/// Bound implied by `φ^{1+r}(t) <= k0 (φ(t) - φ(t+1))` for nonincreasing
/// nonnegative `φ`:
/// `r > 0`: `(φ0^{-r} + r [t-1]⁺ / k0)^{-1/r}`;
/// `r = 0`: `φ0 e^{-k1 [t-1]⁺}` with `k1 = ln(k0/(k0-1))`.
pub fn nakao_bound(phi0: f64, k0: f64, r: f64, t: f64) -> Result<f64> {
    nakao_with(phi0, k0, r, t, 1.0 / k0)
}

/// The algebraic branch with the coefficient `k0 r` in place of `r/k0`.
/// Iterating the recurrence shows this version fails for `k0 > 1`; it is kept
/// for comparison.
pub fn nakao_bound_k0_times_r(phi0: f64, k0: f64, r: f64, t: f64) -> Result<f64> {
    nakao_with(phi0, k0, r, t, k0)
}

fn nakao_with(phi0: f64, k0: f64, r: f64, t: f64, coeff: f64) -> Result<f64> {
    if !(phi0 >= 0.0) {
        return Err(Error::InvalidArgument(format!("phi0 = {phi0} must be nonnegative")));
    }
    if !(r >= 0.0) {
        return Err(Error::InvalidArgument(format!("r = {r} must be nonnegative")));
    }
    let excess = (t - 1.0).max(0.0);
    if r == 0.0 {
        if !(k0 > 1.0) {
            return Err(Error::InvalidArgument(format!(
                "k0 = {k0} must exceed 1 when r = 0"
            )));
        }
        let k1 = (k0 / (k0 - 1.0)).ln();
        Ok(phi0 * (-k1 * excess).exp())
    } else {
        if !(k0 > 0.0) {
            return Err(Error::InvalidArgument(format!("k0 = {k0} must be positive")));
        }
        if phi0 == 0.0 {
            return Ok(0.0);
        }
        Ok((phi0.powf(-r) + coeff * r * excess).powf(-1.0 / r))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnostics::SeriesRow;
    use crate::variational::WellLabel;

    pub(crate) fn synthetic(times: &[f64], e: impl Fn(f64) -> f64) -> EnergySeries {
        EnergySeries::from_rows(
            times
                .iter()
                .map(|&t| SeriesRow {
                    t,
                    e: e(t),
                    j: 0.0,
                    i: 0.0,
                    l2: 0.0,
                    lp_g: 0.0,
                    damping_integral: 0.0,
                    label: WellLabel::InsideW,
                    grad_sq: 0.0,
                    a: 0.0,
                    b: 0.0,
                    kinetic: 0.0,
                    pairing: 0.0,
                })
                .collect(),
        )
    }

    #[test]
    fn exact_exponential() {
        let t: Vec<f64> = (0..200).map(|k| k as f64 * 0.1).collect();
        let rep = fit_decay(&synthetic(&t, |t| 3.0 * (-0.7 * t).exp()), 2.0).unwrap();
        assert_eq!(rep.mode, DecayMode::Exponential);
        assert!((rep.rate - 0.7).abs() < 1e-6);
        assert!((rep.amplitude - 3.0).abs() < 1e-6);
        assert!(rep.r_squared > 0.999_999);
    }

    #[test]
    fn exact_algebraic() {
        let t: Vec<f64> = (0..200).map(|k| k as f64 * 0.5).collect();
        let rep = fit_decay(&synthetic(&t, |t| (1.0 + t).powf(-1.0)), 4.0).unwrap();
        assert_eq!(rep.mode, DecayMode::Algebraic);
        assert!((rep.rate + 1.0).abs() < 1e-6);
        assert!((expected_algebraic_slope(4.0) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn short_window_is_rejected() {
        let t: Vec<f64> = (0..12).map(|k| k as f64).collect();
        assert!(fit_decay(&synthetic(&t, |t| (-t).exp()), 2.0).is_err());
    }

    #[test]
    fn nakao_examples() {
        assert!((nakao_bound(1.0, 2.0, 0.0, 2.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((nakao_bound(0.7, 3.0, 0.5, 0.4).unwrap() - 0.7).abs() < 1e-15);
        assert_eq!(nakao_bound(0.7, 3.0, 0.0, 1.0).unwrap(), 0.7);
        assert!(nakao_bound(1.0, 1.0, 0.0, 2.0).is_err());
    }
}
