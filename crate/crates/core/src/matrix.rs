use std::ops::{Index, IndexMut};

use crate::scalar::Scalar;

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
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

    /// Builds a matrix from rows of equal length. An empty slice gives a
    /// `0 x cols` matrix, so callers pass `cols` explicitly.
    pub fn from_rows(cols: usize, rows: &[Vec<S>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r.iter().cloned());
        }
        Matrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(rows: usize, cols: &[Vec<S>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows, "ragged columns");
            for (i, v) in c.iter().enumerate() {
                m[(i, j)] = v.clone();
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

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [S] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(v.len(), self.cols, "vector length");
        (0..self.rows)
            .map(|i| dot(self.row(i), v))
            .collect()
    }

    /// `vᵀ · self`.
    pub fn left_mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(v.len(), self.rows, "vector length");
        let mut out = vec![S::zero(); self.cols];
        for (i, w) in v.iter().enumerate() {
            if w.is_zero() {
                continue;
            }
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                if !a.is_zero() {
                    *o = o.clone() + w.clone() * a.clone();
                }
            }
        }
        out
    }

    pub fn mul(&self, other: &Matrix<S>) -> Matrix<S> {
        assert_eq!(self.cols, other.rows, "inner dimension");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] = out[(i, j)].clone() + a.clone() * b.clone();
                    }
                }
            }
        }
        out
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &Matrix<S>) -> Matrix<S> {
        assert_eq!(self.cols, other.cols, "column count");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn select_columns(&self, keep: &[usize]) -> Matrix<S> {
        let mut out = Self::zeros(self.rows, keep.len());
        for i in 0..self.rows {
            for (jj, &j) in keep.iter().enumerate() {
                out[(i, jj)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Matrix<T> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn to_f64(&self) -> Matrix<f64> {
        self.map(|x| x.to_f64())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.abs_f64()).fold(0.0, f64::max)
    }

    pub fn rank(&self, rel_threshold: f64) -> usize {
        S::rank_kernel(self, rel_threshold).rank
    }

    pub fn as_rows(&self) -> Vec<Vec<S>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }
}

impl<S> Index<(usize, usize)> for Matrix<S> {
    type Output = S;

    fn index(&self, (i, j): (usize, usize)) -> &S {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<S> IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

pub fn norm_f64<S: Scalar>(v: &[S]) -> f64 {
    v.iter().map(|x| x.to_f64().powi(2)).sum::<f64>().sqrt()
}

/// Rank of the span of a list of vectors of length `dim`.
pub fn span_rank<S: Scalar>(dim: usize, vectors: &[Vec<S>], rel_threshold: f64) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    Matrix::from_rows(dim, vectors).rank(rel_threshold)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    #[test]
    fn products_and_transpose() {
        let a = Matrix::from_rows(2, &[vec![q(1), q(2)], vec![q(3), q(4)]]);
        let b = a.transpose();
        let c = a.mul(&b);
        assert_eq!(c.as_rows(), vec![vec![q(5), q(11)], vec![q(11), q(25)]]);
        assert_eq!(a.mul_vec(&[q(1), q(-1)]), vec![q(-1), q(-1)]);
        assert_eq!(a.left_mul_vec(&[q(1), q(-1)]), vec![q(-2), q(-2)]);
    }

    #[test]
    fn stacking_and_selection() {
        let a = Matrix::from_rows(3, &[vec![q(1), q(2), q(3)]]);
        let b = Matrix::from_rows(3, &[vec![q(4), q(5), q(6)]]);
        let s = a.vstack(&b);
        assert_eq!(s.rows(), 2);
        assert_eq!(s.select_columns(&[2, 0]).as_rows(), vec![vec![q(3), q(1)], vec![q(6), q(4)]]);
        assert_eq!(Matrix::<Rational>::from_rows(4, &[]).rows(), 0);
    }
}
