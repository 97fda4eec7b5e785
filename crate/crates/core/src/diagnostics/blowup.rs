//! Blow-up detection and the explicit blow-up time bounds.

use crate::diagnostics::EnergySeries;
use crate::error::{Error, Result};
use crate::geometry::{power_sum, weighted_inner, Field};
use crate::integrator::SchemeParams;
use crate::variational::{total_energy, ModelParams, WellConstants};

/// First recorded time with `‖u‖_2` above the cap, or the time at which the
/// integrator gave up on non-finite values.
pub fn detect_blowup(series: &EnergySeries, scheme: &SchemeParams) -> Option<f64> {
    series
        .rows()
        .iter()
        .find(|r| r.l2 > scheme.blowup_cap || !r.l2.is_finite())
        .map(|r| r.t)
        .or(series.blowup_time)
}

/// Admissible exponents `η ∈ (0, min{(p-2)/(2p), (p-m)/((m-1)p)}]` for the
/// Lyapunov functional `L = H^{1-η} + ε F'`. Returns the right endpoint.
pub fn subcritical_eta_range(p: f64, m: f64) -> Result<f64> {
    if !(m >= 2.0) {
        return Err(Error::InvalidArgument(format!("m = {m} must be at least 2")));
    }
    if !(p > m) {
        return Err(Error::Hypothesis(format!(
            "blow-up exponent range is empty unless p > m (p = {p}, m = {m})"
        )));
    }
    Ok(((p - 2.0) / (2.0 * p)).min((p - m) / ((m - 1.0) * p)))
}

/// `T* = ((1-η)/(Cη)) L0^{-η/(1-η)}`.
pub fn subcritical_time_bound(l0: f64, eta: f64, c: f64) -> Result<f64> {
    if !(l0 > 0.0) {
        return Err(Error::Hypothesis(format!("L(0) = {l0} must be positive")));
    }
    if !(eta > 0.0 && eta < 1.0) {
        return Err(Error::InvalidArgument(format!("eta = {eta} must lie in (0, 1)")));
    }
    if !(c > 0.0) {
        return Err(Error::InvalidArgument(format!("C = {c} must be positive")));
    }
    Ok((1.0 - eta) / (c * eta) * l0.powf(-eta / (1.0 - eta)))
}

/// `L(0) = H(0)^{1-η} + 2ε(u0, u1)` with `H(0) = level - E(0)`; `level = 0`
/// for negative energy and `level = d1 ∈ (E(0), d)` below the well depth.
pub fn lyapunov_initial(e0: f64, level: f64, pairing: f64, eta: f64, eps: f64) -> Result<f64> {
    let h0 = level - e0;
    if !(h0 > 0.0) {
        return Err(Error::Hypothesis(format!(
            "H(0) = {h0} must be positive (level {level}, E(0) = {e0})"
        )));
    }
    Ok(h0.powf(1.0 - eta) + 2.0 * eps * pairing)
}

/// The level `d1 = (E(0) + d)/2` used below the well depth.
pub fn midpoint_level(e0: f64, d: f64) -> f64 {
    0.5 * (e0 + d)
}

/// The constant `C` that makes `T*` equal an observed blow-up time.
pub fn calibrate_time_constant(l0: f64, eta: f64, observed: f64) -> Result<f64> {
    if !(observed > 0.0) {
        return Err(Error::InvalidArgument("observed blow-up time must be positive".into()));
    }
    subcritical_time_bound(l0, eta, 1.0).map(|t| t / observed)
}

/// Explicit upper bound on the blow-up time for high-energy data.
#[derive(Debug, Clone, PartialEq)]
pub struct LifespanBound {
    pub sigma: f64,
    pub eps2: f64,
    pub eps: f64,
    pub rho1: f64,
    pub rho2: f64,
    /// Free positive parameter in the norm hypothesis.
    pub xi: f64,
    /// Hölder constant `μ(B)^{(1/2-1/p)/(1-σ)}` of the truncated cone.
    pub holder: f64,
    pub c1: f64,
    pub c2: f64,
    pub m1: f64,
    pub m2: f64,
    /// Same with `ε^{σ/(1-σ)}` multiplying `C1`, as the formula is printed.
    pub m2_printed: f64,
    /// `F(0) = ε (u0, u1)`
    pub f0: f64,
    /// `F(0)^{-σ/(1-σ)} (M2/M1) (1-σ)/σ`
    pub t_upper: f64,
    /// The same expression with `M1/M2` in place of `M2/M1`.
    pub t_upper_printed: f64,
}

/// Inputs of the lifespan bound that do not depend on the data.
#[derive(Debug, Clone, Copy)]
pub struct LifespanInputs {
    pub p: f64,
    pub m: f64,
    pub alpha: f64,
    pub lambda1: f64,
    /// `1 - γC*²`
    pub coercivity: f64,
    /// Measure of the truncated cone.
    pub measure: f64,
    pub xi: f64,
}

/// Evaluates every constant of the lifespan bound for data `(u0, u1)`.
pub fn lifespan_bound(
    u0: &Field,
    u1: &Field,
    model: &ModelParams,
    constants: &WellConstants,
    xi: f64,
) -> Result<LifespanBound> {
    let e0 = total_energy(u0, u1, model)?;
    let pairing = weighted_inner(u0, u1)?;
    let u0_sq = power_sum(u0.values(), 2.0, u0.grid().weight());
    let inputs = LifespanInputs {
        p: model.p,
        m: model.m,
        alpha: model.alpha,
        lambda1: constants.lambda1,
        coercivity: constants.c1,
        measure: model.grid().total_measure(),
        xi,
    };
    lifespan_bound_from(&inputs, e0, pairing, u0_sq)
}

/// Scalar core of [`lifespan_bound`].
pub fn lifespan_bound_from(
    k: &LifespanInputs,
    e0: f64,
    pairing: f64,
    u0_sq: f64,
) -> Result<LifespanBound> {
    let p = k.p;
    let m = k.m;
    if !(k.xi > 0.0) {
        return Err(Error::InvalidArgument("xi must be positive".into()));
    }
    if !(e0 >= 0.0) {
        return Err(Error::Hypothesis(format!("E(0) = {e0} must be nonnegative")));
    }
    if !(k.alpha > 0.0) {
        return Err(Error::Hypothesis("inf g must be positive".into()));
    }
    let sigma = (p - 2.0) / (2.0 * p);
    let e_pow = e0.powf(sigma * (m - 1.0));
    let rho1_of = |eps2: f64| {
        k.lambda1 * k.lambda1 * k.coercivity * (p - 2.0) / 4.0
            - e_pow * (p - m) / ((p - 2.0) * eps2.powf(m - 1.0))
    };
    let rho2_of = |eps2: f64| k.alpha * (p - 2.0) / (2.0 * p) - e_pow / eps2.powf(m - 1.0);
    let mut eps2 = 2.0;
    let mut found = false;
    for _ in 0..1100 {
        if rho1_of(eps2) > 0.0 && rho2_of(eps2) > 0.0 {
            found = true;
            break;
        }
        eps2 *= 2.0;
    }
    if !found {
        return Err(Error::Hypothesis(
            "no splitting parameter makes both positivity margins positive".into(),
        ));
    }
    let rho1 = rho1_of(eps2);
    let rho2 = rho2_of(eps2);
    let need = (p + 2.0 + k.xi) / (2.0 * rho1) * e0;
    if !(u0_sq >= need) {
        return Err(Error::Hypothesis(format!(
            "‖u0‖² = {u0_sq} is below (p+2+ξ)E(0)/(2ρ1) = {need}"
        )));
    }
    let eps = (1.0 - sigma) / (2.0 * eps2);
    let f0 = eps * pairing;
    if !(f0 > 0.0) {
        return Err(Error::Hypothesis(format!(
            "F(0) = ε(u0, u1) = {f0} must be positive"
        )));
    }
    let m1 = eps
        * [(p + 6.0) / 4.0, (p + 2.0) / 2.0, 0.5 * k.xi * e0, rho2]
            .into_iter()
            .fold(f64::INFINITY, f64::min);
    let one_minus = 1.0 - sigma;
    let holder = k.measure.powf((0.5 - 1.0 / p) / one_minus);
    let c1 = holder / (2.0 * one_minus);
    let c2 = holder * (2.0 * one_minus - 1.0) / (2.0 * one_minus);
    let q = p * (2.0 * one_minus - 1.0);
    let tail = [c2 * 2.0 / q, c2 * (q - 2.0) / q];
    let pre = 2f64.powf(sigma / one_minus);
    let e_full = eps.powf(1.0 / one_minus);
    let m2 = pre * [1.0, e_full * c1, e_full * tail[0], e_full * tail[1]]
        .into_iter()
        .fold(f64::NEG_INFINITY, f64::max);
    let e_printed = eps.powf(sigma / one_minus);
    let m2_printed = pre
        * [1.0, e_printed * c1, e_full * tail[0], e_full * tail[1]]
            .into_iter()
            .fold(f64::NEG_INFINITY, f64::max);
    let scale = f0.powf(-sigma / one_minus) * one_minus / sigma;
    Ok(LifespanBound {
        sigma,
        eps2,
        eps,
        rho1,
        rho2,
        xi: k.xi,
        holder,
        c1,
        c2,
        m1,
        m2,
        m2_printed,
        f0,
        t_upper: scale * m2 / m1,
        t_upper_printed: scale * m1 / m2_printed,
    })
}
