//! Exact elimination over the rationals.

use num::{BigInt, Integer, One, Zero};

use super::RankKernel;
use crate::matrix::Matrix;
use crate::scalar::Rational;

/// Clears denominators row by row, giving an integer matrix of the same rank.
fn integer_rows(m: &Matrix<Rational>) -> Vec<Vec<BigInt>> {
    (0..m.rows())
        .map(|i| {
            let row = m.row(i);
            let l = row
                .iter()
                .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            row.iter()
                .map(|q| q.numer() * (&l / q.denom()))
                .collect()
        })
        .collect()
}

/// Rank by fraction-free (Bareiss) elimination.
pub fn bareiss_rank(m: &Matrix<Rational>) -> usize {
    let mut a = integer_rows(m);
    let (rows, cols) = (m.rows(), m.cols());
    let mut rank = 0;
    let mut prev = BigInt::one();
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let pivot = a[rank][c].clone();
        let (top, bottom) = a.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        for row in bottom {
            let f = row[c].clone();
            for (x, y) in row[c + 1..].iter_mut().zip(&pivot_row[c + 1..]) {
                *x = (&pivot * &*x - &f * y) / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = pivot;
        rank += 1;
    }
    rank
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref(a: &mut Matrix<Rational>) -> Vec<usize> {
    let (rows, cols) = (a.rows(), a.cols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        a.swap_rows(r, p);
        let inv = a[(r, c)].recip();
        for v in a.row_mut(r).iter_mut() {
            if !v.is_zero() {
                *v = &*v * &inv;
            }
        }
        let pivot_row = a.row(r).to_vec();
        for i in 0..rows {
            if i == r || a[(i, c)].is_zero() {
                continue;
            }
            let f = a[(i, c)].clone();
            for (v, p) in a.row_mut(i).iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v = &*v - &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank and a kernel basis with one vector per free column. Each basis
/// vector has a 1 in its free column and zeros in the other free columns.
pub fn rank_kernel(m: &Matrix<Rational>) -> RankKernel<Rational> {
    let mut a = m.clone();
    let pivots = rref(&mut a);
    let cols = m.cols();
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut kernel = Vec::new();
    for free in (0..cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![Rational::zero(); cols];
        v[free] = Rational::one();
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = -a[(r, free)].clone();
        }
        kernel.push(v);
    }
    let rank = bareiss_rank(m);
    debug_assert_eq!(rank, pivots.len());
    RankKernel {
        rank,
        kernel,
        singular_values: None,
    }
}

/// Solves `a x = b` exactly; `None` if inconsistent. Free variables are 0.
pub fn solve(a: &Matrix<Rational>, b: &[Rational]) -> Option<Vec<Rational>> {
    let cols = a.cols();
    let mut aug = Matrix::zeros(a.rows(), cols + 1);
    for i in 0..a.rows() {
        for j in 0..cols {
            aug[(i, j)] = a[(i, j)].clone();
        }
        aug[(i, cols)] = b[i].clone();
    }
    let pivots = rref(&mut aug);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![Rational::zero(); cols];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = aug[(r, cols)].clone();
    }
    Some(x)
}

/// Scales a vector so its first nonzero entry is 1.
pub fn normalize_first(v: &mut [Rational]) {
    if let Some(f) = v.iter().find(|x| !x.is_zero()).cloned() {
        for x in v.iter_mut() {
            *x = &*x / &f;
        }
    }
}

/// Determinant by elimination.
pub fn det(m: &Matrix<Rational>) -> Rational {
    assert_eq!(m.rows(), m.cols());
    let n = m.rows();
    let mut a = m.clone();
    let mut d = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[(r, c)].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            a.swap_rows(p, c);
            d = -d;
        }
        let pivot = a[(c, c)].clone();
        d *= &pivot;
        for r in c + 1..n {
            if a[(r, c)].is_zero() {
                continue;
            }
            let f = &a[(r, c)] / &pivot;
            for k in c..n {
                let v = &a[(r, k)] - &f * &a[(c, k)];
                a[(r, k)] = v;
            }
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    fn mat(rows: &[&[i64]]) -> Matrix<Rational> {
        let cols = rows[0].len();
        Matrix::from_rows(
            cols,
            &rows
                .iter()
                .map(|r| r.iter().map(|&x| q(x)).collect())
                .collect::<Vec<_>>(),
        )
    }

    #[test]
    fn bareiss_agrees_with_rref() {
        let m = mat(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, 1, 0], &[1, 3, 4, 4]]);
        assert_eq!(bareiss_rank(&m), 2);
        let rk = rank_kernel(&m);
        assert_eq!(rk.rank, 2);
        assert_eq!(rk.kernel.len(), 2);
        for v in &rk.kernel {
            assert!(m.mul_vec(v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn bareiss_with_fractions() {
        let m = Matrix::from_rows(
            2,
            &[
                vec![Rational::from_ratio(1, 3), Rational::from_ratio(1, 2)],
                vec![Rational::from_ratio(2, 3), q(1)],
            ],
        );
        assert_eq!(bareiss_rank(&m), 1);
    }

    #[test]
    fn solve_and_det() {
        let m = mat(&[&[2, 1], &[1, 3]]);
        assert_eq!(det(&m), q(5));
        let x = solve(&m, &[q(3), q(4)]).unwrap();
        assert_eq!(x, vec![q(1), q(1)]);
        let s = mat(&[&[1, 1], &[1, 1]]);
        assert!(solve(&s, &[q(1), q(2)]).is_none());
    }

    #[test]
    fn empty_rows_give_full_kernel() {
        let m = Matrix::<Rational>::zeros(0, 3);
        let rk = rank_kernel(&m);
        assert_eq!(rk.rank, 0);
        assert_eq!(rk.kernel.len(), 3);
        assert_eq!(bareiss_rank(&m), 0);
    }
}
