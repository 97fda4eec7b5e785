//! Discrete Fuchsian Laplacian, cone gradient, singular potentials and the
//! lowest Dirichlet eigenpairs of `-Δ_B`.

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{dot, ConeGrid, Field};
use crate::linalg::{conjugate_gradient, BandedCholesky};

const PARALLEL_THRESHOLD: usize = 1 << 14;

/// `out = Δ_B f` on raw interior values.
pub fn laplacian_into(grid: &ConeGrid, f: &[f64], out: &mut [f64]) {
    let plane = grid.plane();
    let rows = grid.rows();
    let inv_hs2 = 1.0 / (grid.hs() * grid.hs());
    let inv_hx2 = 1.0 / (grid.hx() * grid.hx());
    let nx = grid.spec().nx;
    let dirs = grid.dim() - 1;
    let row_op = |r: usize, out_row: &mut [f64]| {
        let base = r * plane;
        for k in 0..plane {
            let c = f[base + k];
            let below = if r > 0 { f[base + k - plane] } else { 0.0 };
            let above = if r + 1 < rows { f[base + k + plane] } else { 0.0 };
            let mut acc = (above - 2.0 * c + below) * inv_hs2;
            if nx > 1 {
                let mut xs = 0.0;
                for d in 0..dirs {
                    let (fwd, bwd) = torus_neighbours(grid, k, d);
                    xs += f[base + fwd] - 2.0 * c + f[base + bwd];
                }
                acc += xs * inv_hx2;
            }
            out_row[k] = acc;
        }
    };
    if f.len() >= PARALLEL_THRESHOLD {
        out.par_chunks_mut(plane)
            .enumerate()
            .for_each(|(r, chunk)| row_op(r, chunk));
    } else {
        out.chunks_mut(plane)
            .enumerate()
            .for_each(|(r, chunk)| row_op(r, chunk));
    }
}

/// Periodic neighbours of in-plane index `k` along torus direction `d`.
fn torus_neighbours(grid: &ConeGrid, k: usize, d: usize) -> (usize, usize) {
    let nx = grid.spec().nx;
    let stride = grid.torus_stride(d);
    let digit = (k / stride) % nx;
    let fwd = if digit + 1 == nx {
        k - digit * stride
    } else {
        k + stride
    };
    let bwd = if digit == 0 {
        k + (nx - 1) * stride
    } else {
        k - stride
    };
    (fwd, bwd)
}

/// Second-order Fuchsian Laplacian `∂²_s + Δ_{x'}` with Dirichlet rows.
pub fn apply_laplacian(f: &Field) -> Field {
    let mut out = Field::zeros(f.grid());
    laplacian_into(f.grid(), f.values(), out.values_mut());
    out
}

/// Staggered cone gradient `(∂_s, ∂_{x_2}, ..., ∂_{x_n})`.
///
/// The radial component lives on the `Ns` edges between consecutive node rows
/// (boundary rows included), laid out edge-major with `plane` entries per edge.
/// The torus components are periodic forward differences at interior nodes.
#[derive(Debug, Clone)]
pub struct GradientField {
    grid: Arc<ConeGrid>,
    pub radial: Vec<f64>,
    pub torus: Vec<Vec<f64>>,
}

impl GradientField {
    pub fn grid(&self) -> &Arc<ConeGrid> {
        &self.grid
    }

    /// Squared cone `L2` norm of each component, radial first.
    pub fn component_norms_sq(&self) -> Vec<f64> {
        let w = self.grid.weight();
        std::iter::once(&self.radial)
            .chain(self.torus.iter())
            .map(|c| w * dot(c, c))
            .collect()
    }

    pub fn norm_sq(&self) -> f64 {
        self.component_norms_sq().iter().sum()
    }
}

pub fn apply_gradient(f: &Field) -> GradientField {
    let grid = f.grid();
    let plane = grid.plane();
    let rows = grid.rows();
    let v = f.values();
    let at_row = |j: usize, k: usize| -> f64 {
        if j == 0 || j > rows {
            0.0
        } else {
            v[(j - 1) * plane + k]
        }
    };
    let mut radial = vec![0.0; (rows + 1) * plane];
    for e in 0..=rows {
        for k in 0..plane {
            radial[e * plane + k] = (at_row(e + 1, k) - at_row(e, k)) / grid.hs();
        }
    }
    let nx = grid.spec().nx;
    let torus = (0..grid.dim() - 1)
        .map(|d| {
            let mut comp = vec![0.0; v.len()];
            if nx > 1 {
                for r in 0..rows {
                    for k in 0..plane {
                        let (fwd, _) = torus_neighbours(grid, k, d);
                        comp[r * plane + k] = (v[r * plane + fwd] - v[r * plane + k]) / grid.hx();
                    }
                }
            }
            comp
        })
        .collect();
    GradientField {
        grid: grid.clone(),
        radial,
        torus,
    }
}

/// `‖∇_B f‖²` without materializing the gradient.
pub fn gradient_norm_sq(f: &Field) -> f64 {
    dirichlet_form(f.grid(), f.values())
}

pub(crate) fn dirichlet_form(grid: &ConeGrid, v: &[f64]) -> f64 {
    let plane = grid.plane();
    let rows = grid.rows();
    let nx = grid.spec().nx;
    let mut radial = 0.0;
    for e in 0..=rows {
        for k in 0..plane {
            let hi = if e < rows { v[e * plane + k] } else { 0.0 };
            let lo = if e > 0 { v[(e - 1) * plane + k] } else { 0.0 };
            radial += (hi - lo) * (hi - lo);
        }
    }
    let mut torus = 0.0;
    if nx > 1 {
        for r in 0..rows {
            for k in 0..plane {
                for d in 0..grid.dim() - 1 {
                    let (fwd, _) = torus_neighbours(grid, k, d);
                    let diff = v[r * plane + fwd] - v[r * plane + k];
                    torus += diff * diff;
                }
            }
        }
    }
    grid.weight() * (radial / (grid.hs() * grid.hs()) + torus / (grid.hx() * grid.hx()))
}

/// Singular potential of the Hardy inequality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PotentialKind {
    None,
    /// `((n-3)/2)^2 / (x1^2 + |x'|^2)`
    V1,
    /// `((n-1)/2)^2 x1^{-2} e^{-1/x1^2} / (e^{-1/x1^2} + |x'|^2)`
    V2,
    /// Spatially constant potential, mostly useful as a test case.
    Constant(f64),
}

impl PotentialKind {
    pub fn name(&self) -> String {
        match self {
            Self::None => "none".into(),
            Self::V1 => "v1".into(),
            Self::V2 => "v2".into(),
            Self::Constant(c) => format!("constant:{c}"),
        }
    }
}

pub fn potential_value(kind: PotentialKind, x1: f64, xprime_norm: f64, n: usize) -> Result<f64> {
    if !(x1 > 0.0) {
        return Err(Error::InvalidArgument(format!("x1 = {x1} must be positive")));
    }
    if n < 3 {
        return Err(Error::InvalidArgument(format!("n = {n} must be at least 3")));
    }
    let r2 = xprime_norm * xprime_norm;
    Ok(match kind {
        PotentialKind::None => 0.0,
        PotentialKind::V1 => {
            let c = (n as f64 - 3.0) / 2.0;
            c * c / (x1 * x1 + r2)
        }
        PotentialKind::V2 => {
            let c = (n as f64 - 1.0) / 2.0;
            let a = 1.0 / (x1 * x1);
            if r2 == 0.0 {
                c * c * a
            } else {
                // divide through by e^{-a}; overflow of the exponential gives 0
                c * c * a / (1.0 + (r2.ln() + a).exp())
            }
        }
        PotentialKind::Constant(c) => {
            if c < 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "constant potential {c} must be nonnegative"
                )));
            }
            c
        }
    })
}

/// Potential values at every interior node.
pub fn sample_potential(kind: PotentialKind, grid: &Arc<ConeGrid>) -> Result<Field> {
    let values = (0..grid.interior_count())
        .map(|idx| potential_value(kind, grid.x1(idx), grid.xprime_norm(idx), grid.dim()))
        .collect::<Result<Vec<_>>>()?;
    Field::from_values(grid, values)
}

/// Largest band storage (in entries) the direct solver will allocate.
const MAX_BAND_ENTRIES: usize = 40_000_000;

/// Solves `(-Δ_B) x = b` on raw interior values.
#[derive(Debug, Clone)]
pub struct StiffnessSolver {
    grid: Arc<ConeGrid>,
    direct: Option<BandedCholesky>,
}

impl StiffnessSolver {
    pub fn new(grid: &Arc<ConeGrid>) -> Result<Self> {
        let n = grid.interior_count();
        let bw = grid.plane();
        let direct = if n * (bw + 1) <= MAX_BAND_ENTRIES {
            let g = grid.clone();
            Some(BandedCholesky::factor(n, bw, move |i, j| {
                stiffness_entry(&g, i, j)
            })?)
        } else {
            None
        };
        Ok(Self {
            grid: grid.clone(),
            direct,
        })
    }

    pub fn is_direct(&self) -> bool {
        self.direct.is_some()
    }

    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        match &self.direct {
            Some(chol) => {
                let mut x = b.to_vec();
                chol.solve_in_place(&mut x);
                Ok(x)
            }
            None => {
                let grid = &self.grid;
                conjugate_gradient(
                    |v, out| {
                        laplacian_into(grid, v, out);
                        out.iter_mut().for_each(|o| *o = -*o);
                    },
                    b,
                    1e-14,
                    20 * grid.interior_count().max(100),
                )
            }
        }
    }
}

/// Entry `(i, j)` of the matrix of `-Δ_B` (unweighted).
pub(crate) fn stiffness_entry(grid: &ConeGrid, i: usize, j: usize) -> f64 {
    let plane = grid.plane();
    let nx = grid.spec().nx;
    let inv_hs2 = 1.0 / (grid.hs() * grid.hs());
    let inv_hx2 = 1.0 / (grid.hx() * grid.hx());
    let dirs = grid.dim() - 1;
    let (ri, ki) = (i / plane, i % plane);
    let (rj, kj) = (j / plane, j % plane);
    let mut a = 0.0;
    if i == j {
        a += 2.0 * inv_hs2;
        if nx > 1 {
            a += 2.0 * dirs as f64 * inv_hx2;
        }
    }
    if ki == kj && ri.abs_diff(rj) == 1 {
        a -= inv_hs2;
    }
    if ri == rj && nx > 1 {
        for d in 0..dirs {
            let (fwd, bwd) = torus_neighbours(grid, ki, d);
            if fwd == kj {
                a -= inv_hx2;
            }
            if bwd == kj {
                a -= inv_hx2;
            }
        }
    }
    a
}

/// Lowest Dirichlet eigenpair of `-Δ_B`.
#[derive(Debug, Clone)]
pub struct EigenPair {
    pub lambda1: f64,
    /// Positive eigenfield with unit cone `L2` norm.
    pub omega1: Field,
    pub iterations: usize,
    /// `‖-Δ_B ω1 - λ1 ω1‖_2`.
    pub residual: f64,
}

const EIGEN_MAX_ITER: usize = 10_000;

pub fn smallest_eigenpair(grid: &Arc<ConeGrid>) -> Result<EigenPair> {
    let solver = StiffnessSolver::new(grid)?;
    smallest_eigenpair_with(&solver)
}

pub fn smallest_eigenpair_with(solver: &StiffnessSolver) -> Result<EigenPair> {
    let grid = &solver.grid;
    let start = vec![1.0; grid.interior_count()];
    let (lambda, x, iterations, residual) = inverse_iteration(solver, start, &[])?;
    let mut omega1 = Field::from_values(grid, x)?;
    let sign = if omega1.values().iter().sum::<f64>() < 0.0 {
        -1.0
    } else {
        1.0
    };
    let scale = sign / grid.weight().sqrt();
    omega1.values_mut().iter_mut().for_each(|v| *v *= scale);
    Ok(EigenPair {
        lambda1: lambda,
        omega1,
        iterations,
        residual: residual * grid.weight().sqrt(),
    })
}

/// An eigenpair of `-Δ_B` orthogonal to `omega1`, obtained by deflated inverse
/// iteration. With a degenerate second eigenvalue any member of the eigenspace
/// may be returned.
pub fn second_eigenpair(solver: &StiffnessSolver, omega1: &Field) -> Result<(f64, Field)> {
    let grid = &solver.grid;
    let n = grid.interior_count();
    // deterministic, generic start vector
    let start: Vec<f64> = (0..n)
        .map(|i| ((i as f64 + 1.0) * 0.618_033_988_749_895).fract() - 0.5)
        .collect();
    let (lambda, x, _, _) = inverse_iteration(solver, start, &[omega1.values()])?;
    let mut field = Field::from_values(grid, x)?;
    let scale = 1.0 / grid.weight().sqrt();
    field.values_mut().iter_mut().for_each(|v| *v *= scale);
    Ok((lambda, field))
}

/// Inverse iteration on raw vectors with Euclidean normalization, projecting
/// out the span of `deflate` (Euclidean orthogonality) each step.
fn inverse_iteration(
    solver: &StiffnessSolver,
    mut x: Vec<f64>,
    deflate: &[&[f64]],
) -> Result<(f64, Vec<f64>, usize, f64)> {
    let grid = &solver.grid;
    let project = |x: &mut Vec<f64>| {
        for q in deflate {
            let c = dot(x, q) / dot(q, q);
            x.iter_mut().zip(q.iter()).for_each(|(a, b)| *a -= c * b);
        }
    };
    project(&mut x);
    normalize(&mut x)?;
    let mut ax = vec![0.0; x.len()];
    let mut last_residual = f64::INFINITY;
    for it in 1..=EIGEN_MAX_ITER {
        let mut y = solver.solve(&x)?;
        project(&mut y);
        normalize(&mut y)?;
        x = y;
        laplacian_into(grid, &x, &mut ax);
        let lambda = -dot(&x, &ax);
        let residual = ax
            .iter()
            .zip(&x)
            .map(|(a, v)| (-a - lambda * v).powi(2))
            .sum::<f64>()
            .sqrt();
        // stop at a tight residual, or once a solve-limited residual stalls
        let stalled = it > 50 && residual <= 1e-8 * lambda && residual >= 0.999 * last_residual;
        if residual <= 1e-11 * lambda || stalled {
            return Ok((lambda, x, it, residual));
        }
        last_residual = residual;
    }
    Err(Error::NoConvergence {
        what: "inverse iteration",
        iterations: EIGEN_MAX_ITER,
    })
}

fn normalize(x: &mut [f64]) -> Result<()> {
    let norm = dot(x, x).sqrt();
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(Error::InvalidArgument(
            "iteration vector collapsed to zero".into(),
        ));
    }
    x.iter_mut().for_each(|v| *v /= norm);
    Ok(())
}
