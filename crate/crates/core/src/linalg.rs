//! Dense matrices and a cyclic Jacobi eigensolver for symmetric matrices.
//!
//! Everything here targets desk scale (dimensions up to a few hundred), where
//! Jacobi rotations are unconditionally stable and fast enough that no
//! external linear algebra backend is needed.

use crate::error::{Error, Result};

/// Off-diagonal Frobenius threshold for Jacobi convergence, relative to the
/// Frobenius norm of the input.
pub const JACOBI_OFFDIAG_FACTOR: f64 = 1e-13;

/// Maximum number of cyclic Jacobi sweeps before reporting failure.
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Dense row-major matrix of `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    /// Builds a matrix from equal-length rows. Panics on ragged input; callers
    /// validate shapes before constructing.
    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        assert!(!rows.is_empty(), "matrix needs at least one row");
        let cols = rows[0].len();
        assert!(cols > 0, "matrix needs at least one column");
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend_from_slice(r);
        }
        Self {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, v.len(), "vector length must match columns");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    /// `AᵀA`, the Gram matrix of the columns.
    pub fn gram(&self) -> Matrix {
        let cols = self.cols;
        let mut g = Matrix::zeros(cols, cols);
        for r in 0..self.rows {
            let row = self.row(r);
            for (i, &ri) in row.iter().enumerate() {
                if ri == 0.0 {
                    continue;
                }
                let out = &mut g.data[i * cols + i..(i + 1) * cols];
                for (gj, &rj) in out.iter_mut().zip(&row[i..]) {
                    *gj += ri * rj;
                }
            }
        }
        for i in 0..cols {
            for j in 0..i {
                g.data[i * cols + j] = g.data[j * cols + i];
            }
        }
        g
    }

    /// `self += s · u vᵀ`.
    pub fn add_scaled_outer(&mut self, s: f64, u: &[f64], v: &[f64]) {
        assert_eq!(u.len(), self.rows);
        assert_eq!(v.len(), self.cols);
        for (i, &ui) in u.iter().enumerate() {
            let su = s * ui;
            if su == 0.0 {
                continue;
            }
            let row = &mut self.data[i * self.cols..(i + 1) * self.cols];
            for (rj, &vj) in row.iter_mut().zip(v) {
                *rj += su * vj;
            }
        }
    }

    pub fn trace(&self) -> f64 {
        assert_eq!(self.rows, self.cols);
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn off_diagonal_frobenius(&self) -> f64 {
        assert_eq!(self.rows, self.cols);
        let mut s = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                if i != j {
                    let x = self.get(i, j);
                    s += x * x;
                }
            }
        }
        s.sqrt()
    }

    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.cols, other.cols);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                if (self.get(i, j) - self.get(j, i)).abs() > tol {
                    return false;
                }
            }
        }
        true
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Eigendecomposition of a symmetric matrix: values sorted descending,
/// `vectors` holding the matching unit eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

impl SymmetricEigen {
    pub fn eigenvector(&self, k: usize) -> Vec<f64> {
        self.vectors.column(k)
    }
}

/// Cyclic Jacobi eigensolver.
///
/// Sweeps all off-diagonal pairs with two-sided rotations until the
/// off-diagonal Frobenius norm drops below `JACOBI_OFFDIAG_FACTOR` times the
/// Frobenius norm of the input, so every eigenpair satisfies
/// `‖Sv − λv‖ ≤ JACOBI_OFFDIAG_FACTOR·‖S‖_F`.
pub fn symmetric_eigen(s: &Matrix) -> Result<SymmetricEigen> {
    let n = s.rows();
    if s.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "eigensolver needs a square matrix, got {}x{}",
            s.rows(),
            s.cols()
        )));
    }
    debug_assert!(s.is_symmetric(1e-12 * (1.0 + s.frobenius_norm())));

    let mut a = s.clone();
    let mut v = Matrix::identity(n);
    let s_norm = s.frobenius_norm();
    if s_norm == 0.0 || n == 1 {
        let values = (0..n).map(|i| a.get(i, i)).collect();
        return Ok(SymmetricEigen { values, vectors: v });
    }
    let threshold = JACOBI_OFFDIAG_FACTOR * s_norm;

    let mut converged = false;
    for _sweep in 0..JACOBI_MAX_SWEEPS {
        if a.off_diagonal_frobenius() <= threshold {
            converged = true;
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a.get(p, q);
                if apq == 0.0 {
                    continue;
                }
                let app = a.get(p, p);
                let aqq = a.get(q, q);
                // tan of the rotation angle, smaller root for stability
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let sn = t * c;

                rotate_columns(&mut a, p, q, c, sn);
                rotate_rows(&mut a, p, q, c, sn);
                // restore exact symmetry on the annihilated pair
                a.set(p, q, 0.0);
                a.set(q, p, 0.0);
                rotate_columns(&mut v, p, q, c, sn);
            }
        }
    }
    if !converged && a.off_diagonal_frobenius() > threshold {
        return Err(Error::Numerical(format!(
            "Jacobi failed to converge within {JACOBI_MAX_SWEEPS} sweeps \
             (off-diagonal {:.3e}, threshold {:.3e})",
            a.off_diagonal_frobenius(),
            threshold
        )));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a.get(j, j)
            .partial_cmp(&a.get(i, i))
            .expect("eigenvalues are finite")
    });
    let values: Vec<f64> = order.iter().map(|&i| a.get(i, i)).collect();
    let mut vectors = Matrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        for r in 0..n {
            vectors.set(r, dst, v.get(r, src));
        }
    }
    Ok(SymmetricEigen { values, vectors })
}

/// Largest eigenvalue of a symmetric matrix.
pub fn largest_eigenvalue(s: &Matrix) -> Result<f64> {
    Ok(symmetric_eigen(s)?.values[0])
}

fn rotate_columns(m: &mut Matrix, p: usize, q: usize, c: f64, s: f64) {
    for k in 0..m.rows() {
        let kp = m.get(k, p);
        let kq = m.get(k, q);
        m.set(k, p, c * kp - s * kq);
        m.set(k, q, s * kp + c * kq);
    }
}

fn rotate_rows(m: &mut Matrix, p: usize, q: usize, c: f64, s: f64) {
    for k in 0..m.cols() {
        let pk = m.get(p, k);
        let qk = m.get(q, k);
        m.set(p, k, c * pk - s * qk);
        m.set(q, k, s * pk + c * qk);
    }
}
