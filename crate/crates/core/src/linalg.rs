//! Small dense row-major matrices, sized for 2n x 2n Jacobians.

use std::ops::{Index, IndexMut, Mul};

use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    /// Builds a matrix from row slices. Panics on ragged input.
    pub fn from_rows(rows: &[Vec<S>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix rows");
        Self {
            rows: r,
            cols: c,
            data: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<S>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }

    /// Matrix of the standard symplectic form `sum dx_i ^ dy_i` in the
    /// interleaved ordering `(x_1, y_1, ..., x_n, y_n)`.
    pub fn standard_symplectic(dim: usize) -> Self {
        assert!(dim % 2 == 0, "symplectic dimension must be even");
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim / 2 {
            m[(2 * i, 2 * i + 1)] = S::one();
            m[(2 * i + 1, 2 * i)] = -S::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[S] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [S] {
        &mut self.data
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn scaled(&self, k: S) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| *x * k).collect(),
        }
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(S::zero(), |acc, (a, b)| acc + *a * *b)
            })
            .collect()
    }

    /// Row vector times matrix, i.e. the pullback of a covector.
    pub fn vec_mul(&self, v: &[S]) -> Vec<S> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![S::zero(); self.cols];
        for (i, vi) in v.iter().enumerate() {
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                *o = *o + *vi * *a;
            }
        }
        out
    }

    pub fn max_abs(&self) -> S {
        self.data.iter().fold(S::zero(), |m, x| m.max(x.abs()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> S {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        crate::scalar::max_abs_diff(&self.data, &other.data)
    }

    /// Gauss-Jordan inverse with partial pivoting; `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        let scale = a.max_abs().max(S::min_positive_value());
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&i, &j| {
                    a[(i, col)]
                        .abs()
                        .partial_cmp(&a[(j, col)].abs())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
                .unwrap_or(col);
            if a[(pivot, col)].abs() <= scale * S::epsilon() * S::lit(16.0) {
                return None;
            }
            if pivot != col {
                for j in 0..n {
                    a.data.swap(pivot * n + j, col * n + j);
                    inv.data.swap(pivot * n + j, col * n + j);
                }
            }
            let p = a[(col, col)];
            for j in 0..n {
                a[(col, j)] = a[(col, j)] / p;
                inv[(col, j)] = inv[(col, j)] / p;
            }
            for i in 0..n {
                if i == col {
                    continue;
                }
                let f = a[(i, col)];
                if f == S::zero() {
                    continue;
                }
                for j in 0..n {
                    a[(i, j)] = a[(i, j)] - f * a[(col, j)];
                    inv[(i, j)] = inv[(i, j)] - f * inv[(col, j)];
                }
            }
        }
        Some(inv)
    }
}

impl<S> Index<(usize, usize)> for Matrix<S> {
    type Output = S;

    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.cols + j]
    }
}

impl<S> IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.cols + j]
    }
}

impl<S: Scalar> Mul for &Matrix<S> {
    type Output = Matrix<S>;

    fn mul(self, rhs: &Matrix<S>) -> Matrix<S> {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == S::zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] = out[(i, j)] + a * rhs[(k, j)];
                }
            }
        }
        out
    }
}
