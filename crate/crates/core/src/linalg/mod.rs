//! Rank, kernels and linear solves over both arithmetic backends.

pub mod exact;
pub mod float;

use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// Rank of a matrix together with a basis of its right kernel.
#[derive(Clone, Debug, PartialEq)]
pub struct RankKernel<S> {
    pub rank: usize,
    pub kernel: Vec<Vec<S>>,
    /// Sorted descending; only filled by the float backend.
    pub singular_values: Option<Vec<f64>>,
}

impl<S> RankKernel<S> {
    pub fn nullity(&self) -> usize {
        self.kernel.len()
    }

    /// Ratio `σ_rank / σ_{rank+1}`, or infinity when there is no
    /// next singular value or it is exactly zero.
    pub fn gap(&self) -> Option<f64> {
        let sv = self.singular_values.as_ref()?;
        if self.rank == 0 {
            return None;
        }
        let above = sv[self.rank - 1];
        match sv.get(self.rank) {
            Some(&below) if below > 0.0 => Some(above / below),
            _ => Some(f64::INFINITY),
        }
    }
}

/// Basis of `{ y : yᵀ m = 0 }`.
pub fn left_kernel<S: Scalar>(m: &Matrix<S>, rel_threshold: f64) -> Vec<Vec<S>> {
    S::rank_kernel(&m.transpose(), rel_threshold).kernel
}

/// Dimension of the intersection of two subspaces given by spanning sets.
pub fn intersection_dim<S: Scalar>(
    dim: usize,
    a: &[Vec<S>],
    b: &[Vec<S>],
    rel_threshold: f64,
) -> usize {
    let ra = crate::matrix::span_rank(dim, a, rel_threshold);
    let rb = crate::matrix::span_rank(dim, b, rel_threshold);
    let both: Vec<Vec<S>> = a.iter().chain(b).cloned().collect();
    let rab = crate::matrix::span_rank(dim, &both, rel_threshold);
    ra + rb - rab
}

/// Orthonormal basis (Gram-Schmidt, twice) of the span of `vectors`.
pub fn orthonormalize(vectors: &[Vec<f64>], tol: f64) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for _ in 0..2 {
            for q in &out {
                let d: f64 = w.iter().zip(q).map(|(a, b)| a * b).sum();
                for (wi, qi) in w.iter_mut().zip(q) {
                    *wi -= d * qi;
                }
            }
        }
        let n = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > tol {
            out.push(w.into_iter().map(|x| x / n).collect());
        }
    }
    out
}
