//! Small dense-free linear algebra for the symmetric positive definite
//! stiffness matrix `-Δ_B`: a banded Cholesky factorization and a matrix-free
//! conjugate-gradient fallback for grids whose band would not fit in memory.

use crate::error::{Error, Result};

/// Lower band of a symmetric positive definite matrix, row-major with
/// `band[i * (bw + 1) + (bw - (i - j))] = L[i][j]` for `i - bw <= j <= i`.
#[derive(Debug, Clone)]
pub struct BandedCholesky {
    n: usize,
    bw: usize,
    band: Vec<f64>,
}

impl BandedCholesky {
    /// Factors the matrix whose entry `(i, j)` with `j <= i` is `entry(i, j)`.
    pub fn factor(n: usize, bw: usize, entry: impl Fn(usize, usize) -> f64) -> Result<Self> {
        let w = bw + 1;
        let mut band = vec![0.0; n * w];
        for i in 0..n {
            let j0 = i.saturating_sub(bw);
            for j in j0..=i {
                band[i * w + bw - (i - j)] = entry(i, j);
            }
        }
        for i in 0..n {
            let i0 = i.saturating_sub(bw);
            for j in i0..=i {
                let j0 = j.saturating_sub(bw).max(i0);
                let mut sum = band[i * w + bw - (i - j)];
                for k in j0..j {
                    sum -= band[i * w + bw - (i - k)] * band[j * w + bw - (j - k)];
                }
                if i == j {
                    if !(sum > 0.0) {
                        return Err(Error::InvalidArgument(format!(
                            "matrix is not positive definite (pivot {sum} at row {i})"
                        )));
                    }
                    band[i * w + bw] = sum.sqrt();
                } else {
                    band[i * w + bw - (i - j)] = sum / band[j * w + bw];
                }
            }
        }
        Ok(Self { n, bw, band })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn solve_in_place(&self, x: &mut [f64]) {
        let (n, bw, w) = (self.n, self.bw, self.bw + 1);
        for i in 0..n {
            let mut sum = x[i];
            for k in i.saturating_sub(bw)..i {
                sum -= self.band[i * w + bw - (i - k)] * x[k];
            }
            x[i] = sum / self.band[i * w + bw];
        }
        for i in (0..n).rev() {
            let mut sum = x[i];
            for k in i + 1..n.min(i + bw + 1) {
                sum -= self.band[k * w + bw - (k - i)] * x[k];
            }
            x[i] = sum / self.band[i * w + bw];
        }
    }
}

/// Conjugate gradients for a symmetric positive definite operator.
pub fn conjugate_gradient(
    apply: impl Fn(&[f64], &mut [f64]),
    rhs: &[f64],
    rel_tol: f64,
    max_iter: usize,
) -> Result<Vec<f64>> {
    let n = rhs.len();
    let mut x = vec![0.0; n];
    let mut r = rhs.to_vec();
    let mut p = r.clone();
    let mut ap = vec![0.0; n];
    let b_norm = norm2(rhs);
    if b_norm == 0.0 {
        return Ok(x);
    }
    let mut rr = dot(&r, &r);
    for _ in 0..max_iter {
        if rr.sqrt() <= rel_tol * b_norm {
            return Ok(x);
        }
        apply(&p, &mut ap);
        let alpha = rr / dot(&p, &ap);
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        let rr_new = dot(&r, &r);
        let beta = rr_new / rr;
        for i in 0..n {
            p[i] = r[i] + beta * p[i];
        }
        rr = rr_new;
    }
    if rr.sqrt() <= rel_tol * b_norm {
        Ok(x)
    } else {
        Err(Error::NoConvergence {
            what: "conjugate gradient",
            iterations: max_iter,
        })
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tridiag(n: usize) -> impl Fn(usize, usize) -> f64 {
        move |i, j| {
            let _ = n;
            if i == j {
                2.0
            } else if i == j + 1 {
                -1.0
            } else {
                0.0
            }
        }
    }

    #[test]
    fn solves_second_difference() {
        let n = 50;
        let chol = BandedCholesky::factor(n, 1, tridiag(n)).unwrap();
        let exact: Vec<f64> = (0..n).map(|i| (i as f64 * 0.3).sin()).collect();
        let mut b = vec![0.0; n];
        for i in 0..n {
            b[i] = 2.0 * exact[i];
            if i > 0 {
                b[i] -= exact[i - 1];
            }
            if i + 1 < n {
                b[i] -= exact[i + 1];
            }
        }
        let mut x = b.clone();
        chol.solve_in_place(&mut x);
        for (a, e) in x.iter().zip(&exact) {
            assert!((a - e).abs() < 1e-11);
        }
        let cg = conjugate_gradient(
            |v, out| {
                for i in 0..n {
                    out[i] = 2.0 * v[i]
                        - if i > 0 { v[i - 1] } else { 0.0 }
                        - if i + 1 < n { v[i + 1] } else { 0.0 };
                }
            },
            &b,
            1e-14,
            1000,
        )
        .unwrap();
        for (a, e) in cg.iter().zip(&exact) {
            assert!((a - e).abs() < 1e-10);
        }
    }

    #[test]
    fn wide_band_matches_dense() {
        // SPD matrix with a full band of width 3
        let n = 12;
        let bw = 3;
        let entry = |i: usize, j: usize| {
            if i == j {
                10.0 + i as f64
            } else if i - j <= bw {
                1.0 / (1.0 + (i + 2 * j) as f64)
            } else {
                0.0
            }
        };
        let chol = BandedCholesky::factor(n, bw, entry).unwrap();
        let b: Vec<f64> = (0..n).map(|i| 1.0 + i as f64).collect();
        let mut x = b.clone();
        chol.solve_in_place(&mut x);
        for i in 0..n {
            let mut ax = 0.0;
            for j in 0..n {
                let (hi, lo) = if i >= j { (i, j) } else { (j, i) };
                ax += entry(hi, lo) * x[j];
            }
            assert!((ax - b[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_indefinite() {
        assert!(BandedCholesky::factor(2, 1, |i, j| if i == j { 1.0 } else { 3.0 }).is_err());
    }
}
