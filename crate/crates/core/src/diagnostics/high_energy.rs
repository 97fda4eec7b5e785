//! Blow-up criterion for data of arbitrary positive energy and the
//! construction of such data at any prescribed energy level.

use crate::error::{Error, Result};
use crate::geometry::{power_sum, weighted_inner, Field};
use crate::variational::{energy_parts, total_energy, ModelParams, WellConstants};

/// Scalars entering the root equation `K(M)/η(M) = (m-1)M^{1/(m-1)}/m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HighEnergyProblem {
    pub p: f64,
    pub m: f64,
    /// `inf g`
    pub alpha: f64,
    pub lambda1: f64,
    /// `1 - γC*²`
    pub coercivity: f64,
}

impl HighEnergyProblem {
    pub fn from_model(model: &ModelParams, constants: &WellConstants) -> Self {
        Self {
            p: model.p,
            m: model.m,
            alpha: model.alpha,
            lambda1: constants.lambda1,
            coercivity: constants.c1,
        }
    }

    /// Left end of the root interval.
    pub fn m0(&self) -> f64 {
        let (p, m, a, l, c) = (self.p, self.m, self.alpha, self.lambda1, self.coercivity);
        ((m - 2.0) * l * c + (p - m) * a) / ((p - 2.0).powi(2) * l * a * c)
    }

    pub fn k(&self, big_m: f64) -> f64 {
        self.p - (self.m - 2.0) / (self.alpha * (self.p - 2.0) * big_m)
    }

    /// Bracket under the square root of `η(M)`.
    pub fn eta_bracket(&self, big_m: f64) -> f64 {
        let k = self.k(big_m);
        (k - 2.0) * self.lambda1 * self.coercivity - (self.p - self.m) / ((self.p - 2.0) * big_m)
    }

    pub fn eta(&self, big_m: f64) -> f64 {
        ((2.0 + self.k(big_m)) * self.eta_bracket(big_m)).sqrt()
    }

    /// `(m-1) M^{1/(m-1)} / m`, the factor in the pairing condition.
    pub fn threshold_factor(&self, big_m: f64) -> f64 {
        (self.m - 1.0) * big_m.powf(1.0 / (self.m - 1.0)) / self.m
    }

    /// `φ(M) = K(M)/η(M) - (m-1)M^{1/(m-1)}/m`
    pub fn phi(&self, big_m: f64) -> f64 {
        self.k(big_m) / self.eta(big_m) - self.threshold_factor(big_m)
    }

    fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0) {
            return Err(Error::Hypothesis(
                "inf g must be positive for the high-energy criterion".into(),
            ));
        }
        if !(self.p > self.m && self.m >= 2.0) {
            return Err(Error::Hypothesis(format!(
                "high-energy criterion needs p > m >= 2 (p = {}, m = {})",
                self.p, self.m
            )));
        }
        if !(self.coercivity > 0.0) {
            return Err(Error::CouplingTooStrong(1.0 - self.coercivity));
        }
        if !(self.lambda1 > 0.0) {
            return Err(Error::InvalidArgument("lambda1 must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HighEnergyConstants {
    pub m0: f64,
    /// Root of `φ`.
    pub m: f64,
    pub k_m: f64,
    pub eta_m: f64,
    /// Bracket `[lo, hi]` with `φ(lo) > 0 > φ(hi)` found by the doubling search.
    pub bracket: (f64, f64),
    /// `(m-1) M^{1/(m-1)} / m` at the root.
    pub threshold_factor: f64,
}

pub fn high_energy_constants(model: &ModelParams, constants: &WellConstants) -> Result<HighEnergyConstants> {
    solve_high_energy(&HighEnergyProblem::from_model(model, constants))
}

/// Bisection for the root of `φ` on `(M0, ∞)`.
pub fn solve_high_energy(problem: &HighEnergyProblem) -> Result<HighEnergyConstants> {
    problem.validate()?;
    let m0 = problem.m0();
    let lo = m0 * (1.0 + 1e-9);
    if !(problem.phi(lo) > 0.0) {
        return Err(Error::SearchFailed(format!(
            "φ is not positive just above M0 = {m0}"
        )));
    }
    let mut hi = 2.0 * m0;
    let mut doublings = 1;
    while !(problem.phi(hi) < 0.0) {
        hi *= 2.0;
        doublings += 1;
        if doublings > 60 {
            return Err(Error::SearchFailed(format!(
                "φ keeps its sign up to 2^60 M0 = {hi}"
            )));
        }
    }
    let bracket = (lo, hi);
    let (mut a, mut b) = bracket;
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if problem.phi(mid) > 0.0 {
            a = mid;
        } else {
            b = mid;
        }
        if b - a <= 1e-15 * b {
            break;
        }
    }
    let root = 0.5 * (a + b);
    Ok(HighEnergyConstants {
        m0,
        m: root,
        k_m: problem.k(root),
        eta_m: problem.eta(root),
        bracket,
        threshold_factor: problem.threshold_factor(root),
    })
}

/// True iff `(u0, u1) > ((m-1)M^{1/(m-1)}/m) E(0) >= 0`.
pub fn high_energy_blowup_check(
    u0: &Field,
    u1: &Field,
    model: &ModelParams,
    hec: &HighEnergyConstants,
) -> Result<bool> {
    let e0 = total_energy(u0, u1, model)?;
    let pairing = weighted_inner(u0, u1)?;
    Ok(e0 >= 0.0 && pairing > hec.threshold_factor * e0)
}

/// Data `u0 = r1 ω1`, `u1 = r1 ω1 + r2 ω2` with `E(0) = R` exactly that
/// satisfy the high-energy criterion.
pub fn construct_high_energy_data(
    r: f64,
    omega1: &Field,
    omega2: &Field,
    model: &ModelParams,
    hec: &HighEnergyConstants,
) -> Result<(Field, Field)> {
    construct_high_energy_data_from(r, 0.0, omega1, omega2, model, hec)
}

/// As [`construct_high_energy_data`] with `r1` at least `r1_floor`.
pub fn construct_high_energy_data_from(
    r: f64,
    r1_floor: f64,
    omega1: &Field,
    omega2: &Field,
    model: &ModelParams,
    hec: &HighEnergyConstants,
) -> Result<(Field, Field)> {
    if !(r > 0.0) {
        return Err(Error::InvalidArgument(format!("energy level R = {r} must be positive")));
    }
    let w = omega1.grid().weight();
    let n1 = power_sum(omega1.values(), 2.0, w);
    let n2 = power_sum(omega2.values(), 2.0, w);
    if !(n1 > 0.0 && n2 > 0.0) {
        return Err(Error::InvalidArgument("ω1 and ω2 must be nonzero".into()));
    }
    let cross = weighted_inner(omega1, omega2)?;
    if cross.abs() > 1e-10 * (n1 * n2).sqrt() {
        return Err(Error::InvalidArgument(format!(
            "ω1 and ω2 are not orthogonal: (ω1, ω2) = {cross}"
        )));
    }
    let parts = energy_parts(omega1, model)?;
    let p = model.p;
    let chi = |r1: f64| 0.5 * r1 * r1 * (n1 + parts.a) - r1.powf(p) * parts.source / p;
    // r1² ‖ω1‖² > κ R makes the pairing condition strict
    let mut r1 = (1.01 * (hec.threshold_factor * r / n1).sqrt()).max(r1_floor);
    let mut doublings = 0;
    while !(chi(r1) < r) {
        r1 *= 2.0;
        doublings += 1;
        if doublings > 60 {
            return Err(Error::SearchFailed(
                "no amplitude r1 with χ(r1) < R within 2^60 doublings".into(),
            ));
        }
    }
    let r2 = (2.0 * (r - chi(r1)) / n2).sqrt();
    let u0 = omega1.scaled(r1);
    let u1 = u0.add_scaled(r2, omega2)?;
    Ok((u0, u1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference() -> HighEnergyProblem {
        HighEnergyProblem {
            p: 4.0,
            m: 2.0,
            alpha: 1.0,
            lambda1: 1.0,
            coercivity: 1.0,
        }
    }

    #[test]
    fn m0_reference_value() {
        assert!((reference().m0() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn quadratic_damping_root() {
        // 4/√(6(2 - 1/M)) = M/2  ⇔  12M² - 6M - 64 = 0
        let hec = solve_high_energy(&reference()).unwrap();
        let exact = (6.0 + (36.0f64 + 4.0 * 12.0 * 64.0).sqrt()) / 24.0;
        assert!((hec.m - exact).abs() < 1e-12 * exact, "{} vs {exact}", hec.m);
        assert_eq!(hec.k_m, 4.0);
        assert!(hec.k_m > 2.0 && hec.eta_m > 0.0 && hec.m > hec.m0);
        let pb = reference();
        assert!(pb.phi(hec.bracket.0) > 0.0 && pb.phi(hec.bracket.1) < 0.0);
        assert!((hec.threshold_factor - hec.m / 2.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_vanishing_source_weight() {
        let mut pb = reference();
        pb.alpha = 0.0;
        assert!(solve_high_energy(&pb).is_err());
        let mut pb = reference();
        pb.m = 4.0;
        assert!(solve_high_energy(&pb).is_err());
    }
}
