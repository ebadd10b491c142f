//! Dense Cholesky factorization for the small symmetric positive definite
//! coupling matrices. Arrays of interest have at most a few dozen plaquettes,
//! so everything is row-major `Vec<f64>` and O(n³) is fine.

use crate::error::{Error, Result};

/// Pivots at or below this value reject the matrix as not positive definite.
pub const PIVOT_TOLERANCE: f64 = 1e-12;

/// Lower-triangular factor `L` with `A = L·Lᵀ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cholesky {
    dim: usize,
    lower: Vec<f64>,
}

impl Cholesky {
    /// Factors the symmetric matrix `a` (row-major, `dim × dim`). Only the
    /// lower triangle is read.
    pub fn factor(a: &[f64], dim: usize) -> Result<Self> {
        if a.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: a.len(),
            });
        }
        let mut lower = vec![0.0; dim * dim];
        for j in 0..dim {
            let mut diag = a[j * dim + j];
            for k in 0..j {
                diag -= lower[j * dim + k] * lower[j * dim + k];
            }
            if !(diag > PIVOT_TOLERANCE) {
                return Err(Error::Singular {
                    index: j,
                    pivot: diag,
                });
            }
            let ljj = diag.sqrt();
            lower[j * dim + j] = ljj;
            for i in (j + 1)..dim {
                let mut s = a[i * dim + j];
                for k in 0..j {
                    s -= lower[i * dim + k] * lower[j * dim + k];
                }
                lower[i * dim + j] = s / ljj;
            }
        }
        Ok(Self { dim, lower })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Solves `A·x = b` by forward then backward substitution.
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        let n = self.dim;
        if b.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: b.len(),
            });
        }
        let l = &self.lower;
        let mut y = b.to_vec();
        for i in 0..n {
            let mut s = y[i];
            for k in 0..i {
                s -= l[i * n + k] * y[k];
            }
            y[i] = s / l[i * n + i];
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in (i + 1)..n {
                s -= l[k * n + i] * y[k];
            }
            y[i] = s / l[i * n + i];
        }
        Ok(y)
    }
}

/// `xᵀ·A·y` for a row-major integer matrix.
pub(crate) fn bilinear(a: &[i64], dim: usize, x: &[f64], y: &[f64]) -> f64 {
    let mut acc = 0.0;
    for i in 0..dim {
        let row = &a[i * dim..(i + 1) * dim];
        let mut s = 0.0;
        for (aij, yj) in row.iter().zip(y) {
            s += *aij as f64 * yj;
        }
        acc += x[i] * s;
    }
    acc
}
