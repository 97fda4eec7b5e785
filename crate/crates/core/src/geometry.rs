//! Discrete stretched cone in log-radial coordinates.
//!
//! The collar `[x1_min, 1] x T^{n-1}` is mapped through `s = ln x1`, which turns
//! the Fuchsian derivative `x1 d/dx1` into `d/ds` and the cone measure
//! `dx1/x1 dx'` into the flat measure `ds dx'`. Rows `j = 0` and `j = Ns` are
//! Dirichlet rows and carry no unknowns; the cross-section is a periodic
//! `(n-1)`-torus with `Nx` points per direction.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    /// Spatial dimension, at least 3.
    pub n: usize,
    /// Radial subdivisions of `[s_min, 0]`.
    pub ns: usize,
    /// Cross-section points per torus direction.
    pub nx: usize,
    /// Log-radial truncation `s_min = ln x1_min < 0`.
    pub s_min: f64,
    pub torus_length: f64,
}

impl GridSpec {
    pub fn new(n: usize, ns: usize, nx: usize, s_min: f64) -> Self {
        Self {
            n,
            ns,
            nx,
            s_min,
            torus_length: 2.0 * PI,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 3 {
            return Err(Error::InvalidGrid(format!(
                "dimension n = {} must be at least 3",
                self.n
            )));
        }
        if !(self.s_min < 0.0) || !self.s_min.is_finite() {
            return Err(Error::InvalidGrid(format!(
                "s_min = {} must be negative",
                self.s_min
            )));
        }
        if self.ns < 4 {
            return Err(Error::InvalidGrid(format!(
                "ns = {} must be at least 4",
                self.ns
            )));
        }
        // nx = 1 collapses the cross-section to a single mode.
        if self.nx < 1 {
            return Err(Error::InvalidGrid("nx must be at least 1".into()));
        }
        if !(self.torus_length > 0.0) || !self.torus_length.is_finite() {
            return Err(Error::InvalidGrid(format!(
                "torus_length = {} must be positive",
                self.torus_length
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConeGrid {
    spec: GridSpec,
    hs: f64,
    hx: f64,
    weight: f64,
    rows: usize,
    plane: usize,
}

/// Builds the discrete cone for `spec`.
pub fn build_grid(spec: GridSpec) -> Result<Arc<ConeGrid>> {
    ConeGrid::new(spec).map(Arc::new)
}

impl ConeGrid {
    pub fn new(spec: GridSpec) -> Result<Self> {
        spec.validate()?;
        let hs = spec.s_min.abs() / spec.ns as f64;
        let hx = spec.torus_length / spec.nx as f64;
        let rows = spec.ns - 1;
        let plane = spec.nx.pow((spec.n - 1) as u32);
        // Each interior row owns an equal share of the radial interval, so the
        // uniform weights integrate constants exactly over [s_min, 0] x T^{n-1}.
        let row_share = spec.s_min.abs() / rows as f64;
        let weight = row_share * hx.powi((spec.n - 1) as i32);
        Ok(Self {
            spec,
            hs,
            hx,
            weight,
            rows,
            plane,
        })
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn dim(&self) -> usize {
        self.spec.n
    }

    /// Radial spacing `|s_min| / Ns`.
    pub fn hs(&self) -> f64 {
        self.hs
    }

    /// Cross-section spacing.
    pub fn hx(&self) -> f64 {
        self.hx
    }

    /// Quadrature weight shared by every interior node.
    pub fn weight(&self) -> f64 {
        self.weight
    }

    /// Number of interior radial rows, `Ns - 1`.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Nodes per cross-section plane, `Nx^{n-1}`.
    pub fn plane(&self) -> usize {
        self.plane
    }

    pub fn interior_count(&self) -> usize {
        self.rows * self.plane
    }

    /// Measure of the truncated cone, `|s_min| * L^{n-1}`.
    pub fn total_measure(&self) -> f64 {
        self.weight * self.interior_count() as f64
    }

    /// Log-radial coordinate of interior row `r` (node row `j = r + 1`).
    pub fn s_of_row(&self, r: usize) -> f64 {
        self.spec.s_min + (r + 1) as f64 * self.hs
    }

    pub fn row_of(&self, idx: usize) -> usize {
        idx / self.plane
    }

    /// Torus multi-index of a node, fastest direction first.
    pub fn torus_index(&self, idx: usize) -> Vec<usize> {
        let mut k = idx % self.plane;
        let mut out = Vec::with_capacity(self.spec.n - 1);
        for _ in 0..self.spec.n - 1 {
            out.push(k % self.spec.nx);
            k /= self.spec.nx;
        }
        out
    }

    /// Cross-section coordinates of a node in `[0, L)^{n-1}`.
    pub fn xprime(&self, idx: usize) -> Vec<f64> {
        self.torus_index(idx)
            .into_iter()
            .map(|k| k as f64 * self.hx)
            .collect()
    }

    /// Distance from the cross-section origin, folded into `(-L/2, L/2]^{n-1}`.
    pub fn xprime_norm(&self, idx: usize) -> f64 {
        let l = self.spec.torus_length;
        self.xprime(idx)
            .into_iter()
            .map(|x| {
                let folded = x.min(l - x);
                folded * folded
            })
            .sum::<f64>()
            .sqrt()
    }

    /// Original radial coordinate `x1 = e^s` of a node.
    pub fn x1(&self, idx: usize) -> f64 {
        self.s_of_row(self.row_of(idx)).exp()
    }

    /// Stride of torus direction `dir` in the flat node index.
    pub(crate) fn torus_stride(&self, dir: usize) -> usize {
        self.spec.nx.pow(dir as u32)
    }

    /// Upper bound on the spectrum of `-Δ_B`: `4/hs^2 + 4(n-1)/hx^2`.
    pub fn laplacian_bound(&self) -> f64 {
        let torus = if self.spec.nx > 1 {
            4.0 * (self.spec.n - 1) as f64 / (self.hx * self.hx)
        } else {
            0.0
        };
        4.0 / (self.hs * self.hs) + torus
    }
}

/// Real values at the interior nodes of a grid; boundary rows are zero.
#[derive(Debug, Clone)]
pub struct Field {
    grid: Arc<ConeGrid>,
    values: Vec<f64>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        same_grid(&self.grid, &other.grid) && self.values == other.values
    }
}

pub(crate) fn same_grid(a: &Arc<ConeGrid>, b: &Arc<ConeGrid>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Field {
    pub fn zeros(grid: &Arc<ConeGrid>) -> Self {
        Self {
            grid: grid.clone(),
            values: vec![0.0; grid.interior_count()],
        }
    }

    pub fn constant(grid: &Arc<ConeGrid>, c: f64) -> Self {
        Self {
            grid: grid.clone(),
            values: vec![c; grid.interior_count()],
        }
    }

    pub fn from_values(grid: &Arc<ConeGrid>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.interior_count() {
            return Err(Error::InvalidArgument(format!(
                "expected {} values, got {}",
                grid.interior_count(),
                values.len()
            )));
        }
        Ok(Self {
            grid: grid.clone(),
            values,
        })
    }

    /// Samples `f(s, x')` at every interior node.
    pub fn from_fn(grid: &Arc<ConeGrid>, mut f: impl FnMut(f64, &[f64]) -> f64) -> Self {
        let values = (0..grid.interior_count())
            .map(|idx| {
                let s = grid.s_of_row(grid.row_of(idx));
                f(s, &grid.xprime(idx))
            })
            .collect();
        Self {
            grid: grid.clone(),
            values,
        }
    }

    pub fn grid(&self) -> &Arc<ConeGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| c * v).collect(),
        }
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, c: f64, other: &Field) -> Result<Self> {
        self.check_grid(other)?;
        Ok(Self {
            grid: self.grid.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + c * b)
                .collect(),
        })
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            grid: self.grid.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub(crate) fn check_grid(&self, other: &Field) -> Result<()> {
        if same_grid(&self.grid, &other.grid) {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }
}

/// Cone inner product `∫ f g dx1/x1 dx'`.
pub fn weighted_inner(f: &Field, g: &Field) -> Result<f64> {
    f.check_grid(g)?;
    Ok(f.grid.weight * dot(&f.values, &g.values))
}

/// Cone Lebesgue norm `(∫ |f|^p dx1/x1 dx')^{1/p}`.
pub fn cone_norm(f: &Field, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "norm exponent p = {p} must be at least 1"
        )));
    }
    Ok(power_sum(&f.values, p, f.grid.weight).powf(1.0 / p))
}

/// `weight * Σ |v|^p`, with the common exponents special-cased.
pub(crate) fn power_sum(values: &[f64], p: f64, weight: f64) -> f64 {
    let sum: f64 = if p == 2.0 {
        values.iter().map(|v| v * v).sum()
    } else if p == 1.0 {
        values.iter().map(|v| v.abs()).sum()
    } else {
        values.iter().map(|v| v.abs().powf(p)).sum()
    };
    weight * sum
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn demo_grid() -> Arc<ConeGrid> {
        build_grid(GridSpec::new(3, 8, 4, -4.0)).unwrap()
    }

    #[test]
    fn node_counts() {
        let g = demo_grid();
        assert_eq!(g.interior_count(), 112);
        assert_eq!(g.rows(), 7);
        assert_eq!(g.plane(), 16);
        assert!((g.hs() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn constant_quadrature_is_exact() {
        let g = demo_grid();
        let expected = 4.0 * (2.0 * PI).powi(2);
        let one = Field::constant(&g, 1.0);
        assert!((weighted_inner(&one, &one).unwrap() - expected).abs() < 1e-8);
        assert!((g.total_measure() - expected).abs() < 1e-8);
        assert!((expected - 157.913_670_417_429_7).abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(build_grid(GridSpec::new(3, 8, 4, 0.0)).is_err());
        assert!(build_grid(GridSpec::new(2, 8, 4, -1.0)).is_err());
        assert!(build_grid(GridSpec::new(3, 3, 4, -1.0)).is_err());
    }

    #[test]
    fn zero_pairs_to_zero() {
        let g = demo_grid();
        let f = Field::from_fn(&g, |s, x| s * x[0].sin());
        assert_eq!(weighted_inner(&Field::zeros(&g), &f).unwrap(), 0.0);
    }

    #[test]
    fn norm_of_constant_and_indicator() {
        let g = demo_grid();
        let c = Field::constant(&g, -2.5);
        for p in [1.0, 2.0, 3.0, 4.5] {
            let expected = 2.5 * g.total_measure().powf(1.0 / p);
            assert!((cone_norm(&c, p).unwrap() - expected).abs() < 1e-10 * expected);
        }
        let mut ind = Field::zeros(&g);
        ind.values_mut()[17] = -3.0;
        for p in [1.0, 2.0, 3.7] {
            let expected = g.weight().powf(1.0 / p) * 3.0;
            assert!((cone_norm(&ind, p).unwrap() - expected).abs() < 1e-12 * expected);
        }
        assert!(cone_norm(&c, 0.5).is_err());
    }

    #[test]
    fn grid_mismatch_is_reported() {
        let a = demo_grid();
        let b = build_grid(GridSpec::new(3, 6, 4, -4.0)).unwrap();
        let err = weighted_inner(&Field::zeros(&a), &Field::zeros(&b));
        assert!(matches!(err, Err(Error::GridMismatch)));
    }

    #[test]
    fn folded_distance() {
        let g = demo_grid();
        // node with torus index (3, 0): x = 3 hx = 3L/4 folds to L/4
        let idx = 3;
        assert_eq!(g.torus_index(idx), vec![3, 0]);
        assert!((g.xprime_norm(idx) - PI / 2.0).abs() < 1e-14);
    }
}
