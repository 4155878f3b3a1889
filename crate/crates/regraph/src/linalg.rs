// SPDX-License-Identifier: MIT
//! Minimal dense linear algebra for the numeric oracle: the matrices here
//! are tiny (one row per graph node), so plain LU with partial pivoting and
//! an unblocked Cholesky are all that is needed.

use std::fmt;

/// Dense row-major f64 matrix.
#[derive(Clone, PartialEq, Debug)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

/// Numeric failure: a solve hit a (near-)singular system.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SingularMatrix;

impl fmt::Display for SingularMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "matrix is singular to working precision")
    }
}

impl std::error::Error for SingularMatrix {}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Matrix {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_rows(entries: &[&[f64]]) -> Matrix {
        let rows = entries.len();
        let cols = if rows == 0 { 0 } else { entries[0].len() };
        let mut m = Matrix::zeros(rows, cols);
        for (r, row) in entries.iter().enumerate() {
            assert_eq!(row.len(), cols);
            for (c, &v) in row.iter().enumerate() {
                m.set(r, c, v);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c));
            }
        }
        out
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for mid in 0..self.cols {
                let v = self.get(r, mid);
                if v != 0.0 {
                    for c in 0..other.cols {
                        out.set(r, c, out.get(r, c) + v * other.get(mid, c));
                    }
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (v, o) in out.data.iter_mut().zip(other.data.iter()) {
            *v -= o;
        }
        out
    }

    /// Rows and columns selected by index, in the given order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(rows.len(), cols.len());
        for (r, &rp) in rows.iter().enumerate() {
            for (c, &cp) in cols.iter().enumerate() {
                out.set(r, c, self.get(rp, cp));
            }
        }
        out
    }

    /// Solve `self · X = rhs` by LU with partial pivoting.
    pub fn solve(&self, rhs: &Matrix) -> Result<Matrix, SingularMatrix> {
        assert_eq!(self.rows, self.cols);
        assert_eq!(self.rows, rhs.rows);
        let n = self.rows;
        let mut lu = self.clone();
        let mut x = rhs.clone();
        for col in 0..n {
            let mut pivot = col;
            for r in col + 1..n {
                if lu.get(r, col).abs() > lu.get(pivot, col).abs() {
                    pivot = r;
                }
            }
            if lu.get(pivot, col).abs() < 1e-300 {
                return Err(SingularMatrix);
            }
            if pivot != col {
                for c in 0..n {
                    let tmp = lu.get(col, c);
                    lu.set(col, c, lu.get(pivot, c));
                    lu.set(pivot, c, tmp);
                }
                for c in 0..x.cols {
                    let tmp = x.get(col, c);
                    x.set(col, c, x.get(pivot, c));
                    x.set(pivot, c, tmp);
                }
            }
            let d = lu.get(col, col);
            for r in col + 1..n {
                let factor = lu.get(r, col) / d;
                if factor != 0.0 {
                    for c in col..n {
                        lu.set(r, c, lu.get(r, c) - factor * lu.get(col, c));
                    }
                    for c in 0..x.cols {
                        x.set(r, c, x.get(r, c) - factor * x.get(col, c));
                    }
                }
            }
        }
        for col in (0..n).rev() {
            let d = lu.get(col, col);
            for c in 0..x.cols {
                let mut v = x.get(col, c);
                for k in col + 1..n {
                    v -= lu.get(col, k) * x.get(k, c);
                }
                x.set(col, c, v / d);
            }
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<Matrix, SingularMatrix> {
        self.solve(&Matrix::identity(self.rows))
    }

    /// Cholesky factor of a symmetric positive-definite matrix; `None` when
    /// the matrix is not positive definite.
    pub fn cholesky(&self) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut l = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let mut s = self.get(i, j);
                for k in 0..j {
                    s -= l.get(i, k) * l.get(j, k);
                }
                if i == j {
                    if s <= 0.0 {
                        return None;
                    }
                    l.set(i, j, s.sqrt());
                } else {
                    l.set(i, j, s / l.get(j, j));
                }
            }
        }
        Some(l)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}
