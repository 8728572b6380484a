//! Singular value based rank and kernels.

use nalgebra::{DMatrix, DVector};

use super::RankKernel;
use crate::matrix::Matrix;

fn to_dmatrix(m: &Matrix<f64>, min_rows: usize) -> DMatrix<f64> {
    let rows = m.rows().max(min_rows);
    DMatrix::from_fn(rows, m.cols(), |i, j| if i < m.rows() { m[(i, j)] } else { 0.0 })
}

/// Singular values sorted descending and the matching right singular
/// vectors. The matrix is padded with zero rows up to square so that a
/// full set of right singular vectors is available.
pub fn svd_sorted(m: &Matrix<f64>) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = m.cols();
    if n == 0 {
        return (Vec::new(), Vec::new());
    }
    let a = to_dmatrix(m, n);
    let svd = a.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let values = order.iter().map(|&i| svd.singular_values[i]).collect();
    let vectors = order
        .iter()
        .map(|&i| v_t.row(i).iter().copied().collect())
        .collect();
    (values, vectors)
}

/// Threshold `σ_max · rel · max(rows, cols)`.
pub fn rank_threshold(sigma_max: f64, rows: usize, cols: usize, rel: f64) -> f64 {
    sigma_max * rel * rows.max(cols) as f64
}

pub fn rank_kernel(m: &Matrix<f64>, rel_threshold: f64) -> RankKernel<f64> {
    let (rows, cols) = (m.rows(), m.cols());
    let (values, vectors) = svd_sorted(m);
    let sigma_max = values.first().copied().unwrap_or(0.0);
    let thr = rank_threshold(sigma_max, rows, cols, rel_threshold);
    let rank = if sigma_max == 0.0 {
        0
    } else {
        values.iter().take(rows.min(cols)).filter(|&&s| s > thr).count()
    };
    let kernel = vectors[rank..].to_vec();
    let mut reported = values;
    reported.truncate(rows.min(cols));
    RankKernel {
        rank,
        kernel,
        singular_values: Some(reported),
    }
}

/// Minimum norm least squares solution of `a x = b`.
pub fn lstsq(a: &Matrix<f64>, b: &[f64], rel_threshold: f64) -> Vec<f64> {
    let n = a.cols();
    if n == 0 {
        return Vec::new();
    }
    let rows = a.rows().max(n);
    let da = to_dmatrix(a, n);
    let mut bb = DVector::zeros(rows);
    for (i, v) in b.iter().enumerate() {
        bb[i] = *v;
    }
    let svd = da.svd(true, true);
    let smax = svd.singular_values.max();
    let eps = rank_threshold(smax, a.rows(), n, rel_threshold).max(f64::MIN_POSITIVE);
    match svd.solve(&bb, eps) {
        Ok(x) => x.iter().copied().collect(),
        Err(_) => vec![0.0; n],
    }
}
