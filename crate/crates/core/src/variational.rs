//! Energy functionals, the Nehari fibering scale, the discrete embedding and
//! Hardy constants, and potential-well classification.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{cone_norm, dot, power_sum, same_grid, ConeGrid, Field};
use crate::operators::{
    dirichlet_form, sample_potential, smallest_eigenpair_with, EigenPair, PotentialKind,
    StiffnessSolver,
};
use crate::rng;

/// Parameters of the damped wave equation on one grid.
#[derive(Debug, Clone)]
pub struct ModelParams {
    pub n: usize,
    /// Source exponent, `2 < p < (2n-2)/(n-2)`.
    pub p: f64,
    /// Damping exponent, `m >= 2`.
    pub m: f64,
    pub gamma: f64,
    pub potential: PotentialKind,
    /// Potential sampled at the interior nodes.
    pub v: Field,
    /// Nonnegative source weight.
    pub g: Field,
    /// `inf g` over the nodes.
    pub alpha: f64,
    /// `sup g` over the nodes.
    pub beta: f64,
}

/// Upper end of the admissible source exponents, `(2n-2)/(n-2)`.
pub fn source_exponent_ceiling(n: usize) -> f64 {
    (2.0 * n as f64 - 2.0) / (n as f64 - 2.0)
}

impl ModelParams {
    pub fn new(p: f64, m: f64, gamma: f64, potential: PotentialKind, g: Field) -> Result<Self> {
        let grid = g.grid().clone();
        let n = grid.dim();
        let ceiling = source_exponent_ceiling(n);
        if !(p > 2.0 && p < ceiling) {
            return Err(Error::Hypothesis(format!(
                "source exponent must satisfy 2 < p < (2n-2)/(n-2) = {ceiling}, got p = {p}"
            )));
        }
        if !(m >= 2.0) || !m.is_finite() {
            return Err(Error::Hypothesis(format!(
                "damping exponent must satisfy m >= 2, got m = {m}"
            )));
        }
        if !gamma.is_finite() {
            return Err(Error::InvalidArgument("gamma must be finite".into()));
        }
        if g.values().iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
            return Err(Error::Hypothesis(
                "source weight g must be finite and nonnegative".into(),
            ));
        }
        let alpha = g.values().iter().cloned().fold(f64::INFINITY, f64::min);
        let beta = g.values().iter().cloned().fold(0.0, f64::max);
        let v = sample_potential(potential, &grid)?;
        Ok(Self {
            n,
            p,
            m,
            gamma,
            potential,
            v,
            g,
            alpha,
            beta,
        })
    }

    pub fn with_constant_source(
        grid: &Arc<ConeGrid>,
        p: f64,
        m: f64,
        gamma: f64,
        potential: PotentialKind,
        beta: f64,
    ) -> Result<Self> {
        Self::new(p, m, gamma, potential, Field::constant(grid, beta))
    }

    pub fn grid(&self) -> &Arc<ConeGrid> {
        self.g.grid()
    }

    /// Same model with a different potential coupling.
    pub fn with_gamma(&self, gamma: f64) -> Self {
        Self {
            gamma,
            ..self.clone()
        }
    }

    fn check(&self, u: &Field) -> Result<()> {
        if same_grid(u.grid(), self.grid()) {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }
}

/// The building blocks shared by all functionals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyParts {
    /// `‖∇_B u‖²`
    pub grad_sq: f64,
    /// `‖V^{1/2} u‖²`
    pub potential_sq: f64,
    /// `b = ‖g^{1/p} u‖_p^p`
    pub source: f64,
    /// `a = ‖∇_B u‖² - γ‖V^{1/2} u‖²`
    pub a: f64,
}

impl EnergyParts {
    pub fn j(&self, p: f64) -> f64 {
        0.5 * self.a - self.source / p
    }

    pub fn i(&self) -> f64 {
        self.a - self.source
    }
}

pub fn energy_parts(u: &Field, model: &ModelParams) -> Result<EnergyParts> {
    model.check(u)?;
    Ok(parts_raw(model, u.values()))
}

pub(crate) fn parts_raw(model: &ModelParams, u: &[f64]) -> EnergyParts {
    let grid = model.grid();
    let w = grid.weight();
    let grad_sq = dirichlet_form(grid, u);
    let potential_sq = if model.potential == PotentialKind::None {
        0.0
    } else {
        w * u
            .iter()
            .zip(model.v.values())
            .map(|(x, v)| v * x * x)
            .sum::<f64>()
    };
    let p = model.p;
    let source = w * u
        .iter()
        .zip(model.g.values())
        .map(|(x, g)| g * x.abs().powf(p))
        .sum::<f64>();
    EnergyParts {
        grad_sq,
        potential_sq,
        source,
        a: grad_sq - model.gamma * potential_sq,
    }
}

/// Potential energy `J(u) = a/2 - b/p`.
pub fn functional_j(u: &Field, model: &ModelParams) -> Result<f64> {
    Ok(energy_parts(u, model)?.j(model.p))
}

/// Nehari functional `I(u) = a - b`.
pub fn functional_i(u: &Field, model: &ModelParams) -> Result<f64> {
    Ok(energy_parts(u, model)?.i())
}

/// Total energy `E = ‖u_t‖²/2 + J(u)`.
pub fn total_energy(u: &Field, ut: &Field, model: &ModelParams) -> Result<f64> {
    model.check(ut)?;
    let kinetic = power_sum(ut.values(), 2.0, ut.grid().weight());
    Ok(0.5 * kinetic + functional_j(u, model)?)
}

/// Outcome of the fibering-map scan `λ ↦ J(λu)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FiberScale {
    /// `λ* = (a/b)^{1/(p-2)}` where `I(λ* u) = 0`.
    Crossing(f64),
    /// `b = 0`: the ray never meets the Nehari manifold.
    NoCrossing,
    /// `a <= 0` with `b > 0`: `I(λu) < 0` for all `λ > 0`.
    Unstable,
}

impl FiberScale {
    pub fn value(self) -> Option<f64> {
        match self {
            Self::Crossing(l) => Some(l),
            _ => None,
        }
    }
}

pub fn lambda_star(u: &Field, model: &ModelParams) -> Result<FiberScale> {
    let parts = energy_parts(u, model)?;
    if parts.grad_sq == 0.0 {
        return Err(Error::InvalidArgument(
            "fibering scale needs a nonzero gradient".into(),
        ));
    }
    Ok(fiber_scale(&parts, model.p))
}

pub(crate) fn fiber_scale(parts: &EnergyParts, p: f64) -> FiberScale {
    if parts.source <= 0.0 {
        FiberScale::NoCrossing
    } else if parts.a <= 0.0 {
        FiberScale::Unstable
    } else {
        FiberScale::Crossing((parts.a / parts.source).powf(1.0 / (p - 2.0)))
    }
}

/// Result of the embedding-constant search.
#[derive(Debug, Clone)]
pub struct EmbeddingEstimate {
    /// Best ratio `‖g^{1/p} u‖_p / ‖∇_B u‖_2` found.
    pub value: f64,
    /// Maximizing field, normalized to unit gradient norm.
    pub maximizer: Field,
    /// False when the best restart hit the iteration cap.
    pub converged: bool,
    /// Ratio after every iteration of the best restart.
    pub history: Vec<f64>,
}

const ASCENT_MAX_ITER: usize = 500;
const ASCENT_TOL: f64 = 1e-11;

/// Ratio, maximizer, convergence flag and ratio history of one restart.
type Restart = (f64, Vec<f64>, bool, Vec<f64>);

/// Sup of `‖g^{1/p} u‖_p / ‖∇_B u‖_2` over the discrete space.
///
/// Each restart iterates `u ← A^{-1}(g|u|^{p-2}u)` renormalized to unit
/// gradient norm, with `A = -Δ_B`. This is gradient ascent in the energy
/// metric; because `b` is convex the ratio never decreases.
pub fn estimate_embedding_constant(
    model: &ModelParams,
    solver: &StiffnessSolver,
    restarts: usize,
    seed: u64,
) -> Result<EmbeddingEstimate> {
    let grid = model.grid();
    let restarts = restarts.max(1);
    let runs: Vec<Result<Restart>> = (0..restarts)
        .into_par_iter()
        .map(|i| {
            let start = if i == 0 {
                vec![1.0; grid.interior_count()]
            } else if i == 1 {
                localized_start(grid)
            } else {
                let mut r = rng::substream(seed, i as u64);
                let f = rng::gaussian_field(grid, &mut r);
                if i % 2 == 1 {
                    f.values().iter().map(|v| v.abs()).collect()
                } else {
                    f.into_values()
                }
            };
            embedding_ascent(model, solver, start)
        })
        .collect();
    let mut best: Option<(f64, Vec<f64>, bool, Vec<f64>)> = None;
    for run in runs {
        let run = run?;
        if best.as_ref().is_none_or(|b| run.0 > b.0) {
            best = Some(run);
        }
    }
    let (value, x, converged, history) = best.expect("at least one restart");
    Ok(EmbeddingEstimate {
        value,
        maximizer: Field::from_values(grid, x)?,
        converged,
        history,
    })
}

/// Bump centered on the torus node at the origin, the shape of the
/// maximizers the symmetric start cannot reach.
fn localized_start(grid: &ConeGrid) -> Vec<f64> {
    let mid = 0.5 * grid.spec().s_min;
    let width = 0.25 * grid.spec().s_min.abs().max(grid.spec().torus_length);
    (0..grid.interior_count())
        .map(|i| {
            let s = grid.s_of_row(grid.row_of(i));
            let r = grid.xprime_norm(i);
            (-((s - mid).powi(2) + r * r) / (width * width)).exp()
        })
        .collect()
}

fn embedding_ascent(
    model: &ModelParams,
    solver: &StiffnessSolver,
    mut x: Vec<f64>,
) -> Result<(f64, Vec<f64>, bool, Vec<f64>)> {
    let grid = model.grid();
    let p = model.p;
    let normalize = |x: &mut Vec<f64>| -> Option<f64> {
        let d = dirichlet_form(grid, x);
        if !(d > 0.0) || !d.is_finite() {
            return None;
        }
        let s = 1.0 / d.sqrt();
        x.iter_mut().for_each(|v| *v *= s);
        Some(embedding_ratio_raw(model, x))
    };
    let mut ratio = normalize(&mut x)
        .ok_or_else(|| Error::InvalidArgument("ascent start has zero gradient".into()))?;
    let mut history = vec![ratio];
    let mut momentum = 0.5;
    for _ in 0..ASCENT_MAX_ITER {
        let rhs: Vec<f64> = x
            .iter()
            .zip(model.g.values())
            .map(|(u, g)| g * u.abs().powf(p - 2.0) * u)
            .collect();
        let mut y = solver.solve(&rhs)?;
        let Some(mut next) = normalize(&mut y) else {
            break;
        };
        // extrapolate along the last move; kept only when it helps
        let mut z: Vec<f64> = y.iter().zip(&x).map(|(a, b)| a + momentum * (a - b)).collect();
        match normalize(&mut z) {
            Some(r) if r > next => {
                next = r;
                y = z;
                momentum = (momentum * 1.1).min(0.99);
            }
            _ => momentum *= 0.5,
        }
        if next < ratio {
            // only rounding can get here; keep the better iterate
            return Ok((ratio, x, true, history));
        }
        let gain = next - ratio;
        x = y;
        ratio = next;
        history.push(ratio);
        if gain <= ASCENT_TOL * ratio {
            return Ok((ratio, x, true, history));
        }
    }
    Ok((ratio, x, false, history))
}

fn embedding_ratio_raw(model: &ModelParams, x: &[f64]) -> f64 {
    let grid = model.grid();
    let p = model.p;
    let b: f64 = grid.weight()
        * x.iter()
            .zip(model.g.values())
            .map(|(u, g)| g * u.abs().powf(p))
            .sum::<f64>();
    let d = dirichlet_form(grid, x);
    b.powf(1.0 / p) / d.sqrt()
}

/// `‖g^{1/p} u‖_p / ‖∇_B u‖_2` for a single field.
pub fn embedding_ratio(u: &Field, model: &ModelParams) -> Result<f64> {
    model.check(u)?;
    Ok(embedding_ratio_raw(model, u.values()))
}

/// Best constant `C*` in `‖V^{1/2} u‖ <= C* ‖∇_B u‖`, from power iteration on
/// the pencil `(V, -Δ_B)`.
pub fn estimate_hardy_constant(model: &ModelParams, solver: &StiffnessSolver) -> Result<f64> {
    hardy_constant_for(&model.v, solver)
}

pub fn hardy_constant_for(v: &Field, solver: &StiffnessSolver) -> Result<f64> {
    let grid = v.grid();
    if v.values().iter().all(|x| *x == 0.0) {
        return Ok(0.0);
    }
    let mut x = vec![1.0; grid.interior_count()];
    let mut mu_prev = 0.0;
    for _ in 0..10_000 {
        let vx: Vec<f64> = x.iter().zip(v.values()).map(|(a, b)| a * b).collect();
        let mut y = solver.solve(&vx)?;
        let vy: f64 = y
            .iter()
            .zip(v.values())
            .map(|(a, b)| b * a * a)
            .sum();
        let ay = dirichlet_form(grid, &y) / grid.weight();
        let mu = vy / ay;
        let s = 1.0 / ay.sqrt();
        y.iter_mut().for_each(|a| *a *= s);
        x = y;
        if (mu - mu_prev).abs() <= 1e-15 * mu {
            return Ok(mu.sqrt());
        }
        mu_prev = mu;
    }
    Err(Error::NoConvergence {
        what: "Hardy pencil power iteration",
        iterations: 10_000,
    })
}

/// Bounds `c1 a' <= ‖∇u‖² - γ‖V^{1/2}u‖² <= c2 a'` with `a' = ‖∇u‖²`.
pub fn hardy_bounds(gamma: f64, c_star_hardy: f64) -> (f64, f64) {
    let shift = 1.0 - gamma * c_star_hardy * c_star_hardy;
    if gamma >= 0.0 {
        (shift, 1.0)
    } else {
        (1.0, shift)
    }
}

/// Every variational constant of the model on its grid.
#[derive(Debug, Clone)]
pub struct WellConstants {
    pub lambda1: f64,
    /// Embedding constant `C_*`.
    pub c_star_emb: f64,
    /// Hardy constant `C*`.
    pub c_star_hardy: f64,
    pub c1: f64,
    pub c2: f64,
    /// Well depth from the closed form.
    pub d: f64,
    pub theta: Option<f64>,
    pub embedding_converged: bool,
}

impl WellConstants {
    /// `1 - γ C*²`, the coercivity factor of the quadratic form for `γ >= 0`.
    pub fn coercivity(&self) -> f64 {
        self.c1
    }
}

/// Cached objects shared by the constant estimators.
#[derive(Debug, Clone)]
pub struct SpectralData {
    pub solver: StiffnessSolver,
    pub eigen: EigenPair,
}

impl SpectralData {
    pub fn new(grid: &Arc<ConeGrid>) -> Result<Self> {
        let solver = StiffnessSolver::new(grid)?;
        let eigen = smallest_eigenpair_with(&solver)?;
        Ok(Self { solver, eigen })
    }
}

pub fn compute_well_constants(
    model: &ModelParams,
    spectral: &SpectralData,
    restarts: usize,
    seed: u64,
) -> Result<WellConstants> {
    let emb = estimate_embedding_constant(model, &spectral.solver, restarts, seed)?;
    let c_star_hardy = estimate_hardy_constant(model, &spectral.solver)?;
    let (c1, c2) = hardy_bounds(model.gamma, c_star_hardy);
    let d = depth_formula(model.p, model.gamma, emb.value, c_star_hardy)?;
    Ok(WellConstants {
        lambda1: spectral.eigen.lambda1,
        c_star_emb: emb.value,
        c_star_hardy,
        c1,
        c2,
        d,
        theta: None,
        embedding_converged: emb.converged,
    })
}

/// `d = ((p-2)/(2p)) C_*^{-2p/(p-2)} c1^{p/(p-2)}`; for `γ >= 0`, `c1 = 1 - γC*²`.
pub fn depth_formula(p: f64, gamma: f64, c_star_emb: f64, c_star_hardy: f64) -> Result<f64> {
    let coupling = gamma * c_star_hardy * c_star_hardy;
    if coupling >= 1.0 {
        return Err(Error::CouplingTooStrong(coupling));
    }
    if !(c_star_emb > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "embedding constant {c_star_emb} must be positive"
        )));
    }
    let (c1, _) = hardy_bounds(gamma, c_star_hardy);
    Ok((p - 2.0) / (2.0 * p) * c_star_emb.powf(-2.0 * p / (p - 2.0)) * c1.powf(p / (p - 2.0)))
}

pub fn depth_d(constants: &WellConstants, model: &ModelParams) -> Result<f64> {
    depth_formula(model.p, model.gamma, constants.c_star_emb, constants.c_star_hardy)
}

/// `J(λ* u)` on the Nehari manifold, or `None` when the ray does not cross it.
pub fn nehari_level(u: &Field, model: &ModelParams) -> Result<Option<f64>> {
    let parts = energy_parts(u, model)?;
    Ok(nehari_level_of(&parts, model.p))
}

fn nehari_level_of(parts: &EnergyParts, p: f64) -> Option<f64> {
    if parts.source > 0.0 && parts.a > 0.0 {
        Some((p - 2.0) / (2.0 * p) * parts.a.powf(p / (p - 2.0)) / parts.source.powf(2.0 / (p - 2.0)))
    } else {
        None
    }
}

/// Sampled infimum of `J` over the Nehari manifold.
///
/// Random smooth directions seed a derivative-free hill-climb on
/// `u ↦ J(λ*(u) u)` driven by smooth random perturbations with an adaptive
/// step. The result is an upper bound on the discrete well depth.
pub fn sampled_nehari_infimum(model: &ModelParams, proposals: usize, seed: u64) -> Result<f64> {
    let grid = model.grid();
    let p = model.p;
    let mut r = rng::seeded(seed);
    let level = |x: &[f64]| nehari_level_of(&parts_raw(model, x), p).unwrap_or(f64::INFINITY);
    let starts = (proposals / 10).clamp(1, 200);
    let mut best = rng::smooth_field(grid, 3, &mut r).into_values();
    let mut best_level = level(&best);
    for _ in 1..starts {
        let cand = rng::smooth_field(grid, 3, &mut r).into_values();
        let l = level(&cand);
        if l < best_level {
            best = cand;
            best_level = l;
        }
    }
    let mut step = 0.3;
    let scale = |x: &[f64]| dot(x, x).sqrt();
    for _ in starts..proposals {
        let pert = if r.random_bool(0.5) {
            rng::smooth_field(grid, 6, &mut r).into_values()
        } else {
            rng::gaussian_field(grid, &mut r).into_values()
        };
        let ratio = step * scale(&best) / scale(&pert).max(f64::MIN_POSITIVE);
        let cand: Vec<f64> = best.iter().zip(&pert).map(|(b, q)| b + ratio * q).collect();
        let l = level(&cand);
        if l < best_level {
            best = cand;
            best_level = l;
            step = (step * 1.5).min(1.0);
        } else {
            step = (step * 0.95).max(1e-6);
        }
    }
    if best_level.is_finite() {
        Ok(best_level)
    } else {
        Err(Error::SearchFailed(
            "no sampled direction crosses the Nehari manifold".into(),
        ))
    }
}

/// Position of a state relative to the potential well.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WellLabel {
    InsideW,
    InsideV,
    OnNehari,
    AboveD,
    Zero,
}

impl WellLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::InsideW => "W",
            Self::InsideV => "V",
            Self::OnNehari => "N",
            Self::AboveD => "above-d",
            Self::Zero => "zero",
        }
    }

    pub fn in_well(self) -> bool {
        matches!(self, Self::InsideW | Self::Zero)
    }
}

impl fmt::Display for WellLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Relative tolerance of the Nehari-membership test.
pub const NEHARI_TOL: f64 = 1e-8;

pub fn classify_state(u: &Field, model: &ModelParams, constants: &WellConstants) -> Result<WellLabel> {
    let parts = energy_parts(u, model)?;
    Ok(classify_parts(&parts, model.p, constants.d))
}

pub fn classify_parts(parts: &EnergyParts, p: f64, d: f64) -> WellLabel {
    if parts.grad_sq == 0.0 {
        return WellLabel::Zero;
    }
    let i = parts.i();
    let j = parts.j(p);
    if i.abs() <= NEHARI_TOL * (parts.a.abs() + parts.source.abs()) {
        WellLabel::OnNehari
    } else if j < d && i > 0.0 {
        WellLabel::InsideW
    } else if j < d && i < 0.0 {
        WellLabel::InsideV
    } else {
        WellLabel::AboveD
    }
}

/// Gradient level separating the two signs of `I`:
/// `((1 - γC*²)/C_*^p)^{1/(p-2)}`.
pub fn gradient_threshold(constants: &WellConstants, p: f64) -> f64 {
    (constants.c1 / constants.c_star_emb.powf(p)).powf(1.0 / (p - 2.0))
}

/// `θ = c1 - C_*^p (2p E0 / ((p-2) c1))^{(p-2)/2}`, defined for `0 <= E0 < d`.
pub fn theta_coefficient(e0: f64, constants: &WellConstants, model: &ModelParams) -> Result<f64> {
    theta_from(e0, constants.c_star_emb, constants.c1, constants.d, model.p)
}

pub fn theta_from(e0: f64, c_star_emb: f64, c1: f64, d: f64, p: f64) -> Result<f64> {
    if !(e0 < d) {
        return Err(Error::EnergyNotBelowDepth { energy: e0, depth: d });
    }
    if e0 < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "initial energy {e0} must be nonnegative"
        )));
    }
    let bracket = 2.0 * p * e0 / ((p - 2.0) * c1);
    Ok(c1 - c_star_emb.powf(p) * bracket.powf((p - 2.0) / 2.0))
}

/// Interpolation exponent `θ` with `1/s2 = (1-θ)/s1 + θ(1/2 - 1/n)`.
pub fn gn_theta(s1: f64, s2: f64, n: usize) -> Result<f64> {
    let top = 2.0 * n as f64 / (n as f64 - 2.0);
    if !(1.0 <= s1 && s1 < s2 && s2 <= top * (1.0 + 1e-15)) {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= s1 < s2 <= 2n/(n-2) = {top}, got s1 = {s1}, s2 = {s2}"
        )));
    }
    let nf = n as f64;
    Ok((1.0 / s1 - 1.0 / s2) / (1.0 / s1 - 0.5 + 1.0 / nf))
}

/// `‖u‖_{s2} / (‖∇_B u‖^θ ‖u‖_{s1}^{1-θ})`, the ratio bounded by the
/// Gagliardo–Nirenberg constant.
pub fn gn_ratio(u: &Field, s1: f64, s2: f64) -> Result<f64> {
    let theta = gn_theta(s1, s2, u.grid().dim())?;
    let grad = dirichlet_form(u.grid(), u.values()).sqrt();
    Ok(cone_norm(u, s2)? / (grad.powf(theta) * cone_norm(u, s1)?.powf(1.0 - theta)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_grid, GridSpec};

    fn model(n: usize, p: f64) -> ModelParams {
        let g = build_grid(GridSpec::new(n, 8, 4, -3.0)).unwrap();
        ModelParams::with_constant_source(&g, p, 2.0, 0.0, PotentialKind::None, 1.0).unwrap()
    }

    #[test]
    fn rejects_bad_exponents() {
        let g = build_grid(GridSpec::new(3, 8, 4, -3.0)).unwrap();
        assert!(ModelParams::with_constant_source(&g, 1.5, 2.0, 0.0, PotentialKind::None, 1.0).is_err());
        assert!(ModelParams::with_constant_source(&g, 4.0, 2.0, 0.0, PotentialKind::None, 1.0).is_err());
        assert!(ModelParams::with_constant_source(&g, 3.0, 1.5, 0.0, PotentialKind::None, 1.0).is_err());
    }

    #[test]
    fn zero_field_functionals() {
        let m = model(3, 3.0);
        let z = Field::zeros(m.grid());
        assert_eq!(functional_j(&z, &m).unwrap(), 0.0);
        assert_eq!(functional_i(&z, &m).unwrap(), 0.0);
        assert_eq!(total_energy(&z, &z, &m).unwrap(), 0.0);
    }

    #[test]
    fn depth_examples() {
        assert!((depth_formula(4.0, 0.0, 1.0, 0.0).unwrap() - 0.25).abs() < 1e-15);
        assert!(depth_formula(4.0, 1.0, 1.0, 1.0).is_err());
        let near = depth_formula(4.0, 0.999_999, 1.0, 1.0).unwrap();
        assert!(near > 0.0 && near < 1e-10);
    }

    #[test]
    fn theta_examples() {
        assert_eq!(theta_from(0.0, 1.0, 1.0, 0.25, 4.0).unwrap(), 1.0);
        assert!((theta_from(0.125, 1.0, 1.0, 0.25, 4.0).unwrap() - 0.5).abs() < 1e-15);
        let d = depth_formula(3.0, 0.2, 0.7, 1.1).unwrap();
        let c1 = 1.0 - 0.2 * 1.21;
        let t = theta_from(d * (1.0 - 1e-12), 0.7, c1, d, 3.0).unwrap();
        assert!(t > 0.0 && t < 1e-10);
        assert!(theta_from(d, 0.7, c1, d, 3.0).is_err());
    }

    #[test]
    fn gn_theta_examples() {
        assert!((gn_theta(2.0, 3.0, 3).unwrap() - 0.5).abs() < 1e-15);
        assert!((gn_theta(1.3, 6.0, 3).unwrap() - 1.0).abs() < 1e-14);
        assert!((gn_theta(2.0, 10.0 / 3.0, 5).unwrap() - 1.0).abs() < 1e-14);
        assert!(gn_theta(2.0, 2.0, 3).is_err());
        assert!(gn_theta(0.5, 2.0, 3).is_err());
    }

    #[test]
    fn lambda_star_unit_and_degenerate() {
        let m = model(3, 3.0);
        let u = Field::from_fn(m.grid(), |s, x| (-s * (s + 3.0)) * (1.0 + 0.3 * x[0].cos()));
        let parts = energy_parts(&u, &m).unwrap();
        // rescale so that a = b, then λ* = 1
        let scale = (parts.a / parts.source).powf(1.0 / (m.p - 2.0));
        let on = u.scaled(scale);
        let l = lambda_star(&on, &m).unwrap().value().unwrap();
        assert!((l - 1.0).abs() < 1e-12);
        let g0 = ModelParams::with_constant_source(m.grid(), 3.0, 2.0, 0.0, PotentialKind::None, 0.0).unwrap();
        assert_eq!(lambda_star(&u, &g0).unwrap(), FiberScale::NoCrossing);
        let strong = ModelParams::with_constant_source(m.grid(), 3.0, 2.0, 1e6, PotentialKind::Constant(1.0), 1.0).unwrap();
        assert_eq!(lambda_star(&u, &strong).unwrap(), FiberScale::Unstable);
    }

    #[test]
    fn hardy_constant_for_constant_potential() {
        let g = build_grid(GridSpec::new(3, 10, 4, -3.0)).unwrap();
        let spectral = SpectralData::new(&g).unwrap();
        let m = ModelParams::with_constant_source(&g, 3.0, 2.0, 0.1, PotentialKind::Constant(2.5), 1.0).unwrap();
        let c = estimate_hardy_constant(&m, &spectral.solver).unwrap();
        assert!((c * c - 2.5 / spectral.eigen.lambda1).abs() < 1e-10 * c * c);
        let none = ModelParams::with_constant_source(&g, 3.0, 2.0, 0.1, PotentialKind::None, 1.0).unwrap();
        assert_eq!(estimate_hardy_constant(&none, &spectral.solver).unwrap(), 0.0);
    }

    #[test]
    fn ascent_is_monotone() {
        let m = model(3, 3.0);
        let spectral = SpectralData::new(m.grid()).unwrap();
        let est = estimate_embedding_constant(&m, &spectral.solver, 8, 3).unwrap();
        assert!(est.converged);
        assert!(est.history.windows(2).all(|w| w[1] >= w[0]));
        let r = embedding_ratio(&est.maximizer, &m).unwrap();
        assert!((r - est.value).abs() < 1e-12 * est.value);
    }
}
