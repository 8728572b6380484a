//! Self-stresses: row dependencies of the rigidity matrix, the homogeneous
//! equilibrium equations, projective transport, and weavings.

use crate::error::{Error, Result};
use crate::geometry::IncidenceGeometry;
use crate::linalg::left_kernel;
use crate::matrix::Matrix;
use crate::realization::{cross3, norm3, normalize_with_factor, ProjectiveTransform, Realization, Vec3};
use crate::rigidity::RigidityMatrix;
use crate::scalar::Scalar;

/// Tolerance of the float equilibrium check, scaled per sum.
pub const EQUILIBRIUM_TOLERANCE: f64 = 1e-8;

/// Scales so the first entry that is not negligible equals 1.
pub fn normalize_first_nonzero<S: Scalar>(v: &[S], tol: f64) -> Vec<S> {
    let scale = v.iter().map(|x| x.abs_f64()).fold(0.0, f64::max);
    match v.iter().find(|x| !x.negligible(scale, tol)) {
        Some(f) => {
            let f = f.clone();
            v.iter().map(|x| x.clone() / f.clone()).collect()
        }
        None => v.to_vec(),
    }
}

/// Basis of the left null space, one coefficient per incidence.
pub fn cokernel_stresses<S: Scalar>(m: &RigidityMatrix<S>, rel_threshold: f64) -> Vec<Vec<S>> {
    left_kernel(&m.matrix, rel_threshold)
        .into_iter()
        .map(|v| normalize_first_nonzero(&v, rel_threshold))
        .collect()
}

/// `ωᵀ M = 0`.
pub fn is_row_dependence<S: Scalar>(m: &RigidityMatrix<S>, omega: &[S], tol: f64) -> bool {
    let r = m.matrix.left_mul_vec(omega);
    let scale = m.matrix.max_abs() * omega.iter().map(|x| x.abs_f64()).fold(0.0, f64::max);
    r.iter().all(|x| x.negligible(scale, tol))
}

fn sum_vanishes<S: Scalar>(terms: &[(S, Vec3<S>)], tol: f64) -> bool {
    let mut acc = [S::zero(), S::zero(), S::zero()];
    let mut scale = 0.0_f64;
    for (w, v) in terms {
        scale = scale.max(w.abs_f64() * norm3(v));
        for k in 0..3 {
            acc[k] = acc[k].clone() + w.clone() * v[k].clone();
        }
    }
    acc.iter().all(|x| x.negligible(scale, tol))
}

/// `Σ ω_ij l_i = 0` at every point and `Σ ω_ij p_j = 0` on every line,
/// using representatives whose last nonzero coordinate is 1.
pub fn verify_equilibrium<S: Scalar>(r: &Realization<S>, omega: &[S]) -> bool {
    let g = r.geometry();
    let n = r.normalized();
    let tol = EQUILIBRIUM_TOLERANCE;
    let point_ok = (0..g.num_points()).all(|j| {
        let terms: Vec<(S, Vec3<S>)> = g
            .incidences()
            .iter()
            .enumerate()
            .filter(|(_, &(p, _))| p == j)
            .map(|(k, &(_, l))| (omega[k].clone(), n.line(l).clone()))
            .collect();
        sum_vanishes(&terms, tol)
    });
    let line_ok = (0..g.num_lines()).all(|i| {
        let terms: Vec<(S, Vec3<S>)> = g
            .incidences()
            .iter()
            .enumerate()
            .filter(|(_, &(_, l))| l == i)
            .map(|(k, &(p, _))| (omega[k].clone(), n.point(p).clone()))
            .collect();
        sum_vanishes(&terms, tol)
    });
    point_ok && line_ok
}

/// Coefficients around every point and along every line sum to zero.
pub fn combinatorial_sums_vanish<S: Scalar>(g: &IncidenceGeometry, omega: &[S], tol: f64) -> bool {
    let scale = omega.iter().map(|x| x.abs_f64()).fold(0.0, f64::max);
    let mut by_point = vec![S::zero(); g.num_points()];
    let mut by_line = vec![S::zero(); g.num_lines()];
    for (k, &(p, l)) in g.incidences().iter().enumerate() {
        by_point[p] = by_point[p].clone() + omega[k].clone();
        by_line[l] = by_line[l].clone() + omega[k].clone();
    }
    by_point.iter().chain(&by_line).all(|x| x.negligible(scale, tol))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StressEquivalence {
    pub row_dependence: bool,
    pub equilibrium: bool,
    pub combinatorial: bool,
}

impl StressEquivalence {
    /// Row dependence holds exactly when both other conditions hold.
    pub fn agrees(&self) -> bool {
        self.row_dependence == (self.equilibrium && self.combinatorial)
    }
}

pub fn chart_stress_equivalence<S: Scalar>(r: &Realization<S>, omega: &[S], tol: f64) -> Result<StressEquivalence> {
    let m = crate::rigidity::build_rigidity_matrix(r)?;
    Ok(StressEquivalence {
        row_dependence: is_row_dependence(&m, omega, tol),
        equilibrium: verify_equilibrium(r, omega),
        combinatorial: combinatorial_sums_vanish(r.geometry(), omega, tol),
    })
}

/// Transports an equilibrium stress on `r` to one on `r` transformed by
/// `t`: `ω'_ij = λ_j μ_i ω_ij` where `T p_j = λ_j p'_j` and
/// `T^{-T} l_i = μ_i l'_i` for normalized representatives.
pub fn transport_stress<S: Scalar>(r: &Realization<S>, t: &ProjectiveTransform<S>, omega: &[S]) -> Result<Vec<S>> {
    let n = r.normalized();
    let tol = r.tolerance();
    let factor = |v: Vec3<S>| {
        normalize_with_factor(&v, tol)
            .map(|(_, f)| f)
            .ok_or(Error::SingularTransform)
    };
    let lambda = n
        .points()
        .iter()
        .map(|p| factor(t.apply_point(p)))
        .collect::<Result<Vec<_>>>()?;
    let mu = n
        .lines()
        .iter()
        .map(|l| factor(t.apply_line(l)))
        .collect::<Result<Vec<_>>>()?;
    Ok(r.geometry()
        .incidences()
        .iter()
        .zip(omega)
        .map(|(&(p, l), w)| lambda[p].clone() * mu[l].clone() * w.clone())
        .collect())
}

/// Lines joined by directed edges, with finite crossing points.
#[derive(Clone, Debug, PartialEq)]
pub struct Weaving<S> {
    pub lines: Vec<Vec3<S>>,
    pub edges: Vec<(usize, usize)>,
    /// `(x, y, 1)` crossing of each edge.
    pub crossings: Vec<Vec3<S>>,
}

impl<S: Scalar> Weaving<S> {
    /// Recomputes crossings from line coordinates; errors on an edge whose
    /// lines are parallel or coincide. `names` labels the vertices.
    pub fn new(lines: Vec<Vec3<S>>, edges: Vec<(usize, usize)>, names: &[String], tol: f64) -> Result<Self> {
        let mut crossings = Vec::with_capacity(edges.len());
        for &(i, j) in &edges {
            let x = cross3(&lines[i], &lines[j]);
            if x[2].negligible(norm3(&lines[i]) * norm3(&lines[j]), tol) {
                return Err(Error::ParallelLines(names[i].clone(), names[j].clone()));
            }
            let z = x[2].clone();
            crossings.push([x[0].clone() / z.clone(), x[1].clone() / z, S::one()]);
        }
        Ok(Weaving {
            lines,
            edges,
            crossings,
        })
    }

    /// `3|V| x |E|` matrix of the vertex equations `Σ_j s_ij (x_ij, y_ij, 1) = 0`,
    /// with `s_ji = -s_ij` folded in.
    pub fn equations(&self) -> Matrix<S> {
        let mut m: Matrix<S> = Matrix::zeros(3 * self.lines.len(), self.edges.len());
        for (e, &(i, j)) in self.edges.iter().enumerate() {
            for k in 0..3 {
                let c = self.crossings[e][k].clone();
                m[(3 * i + k, e)] = m[(3 * i + k, e)].clone() + c.clone();
                m[(3 * j + k, e)] = m[(3 * j + k, e)].clone() - c;
            }
        }
        m
    }

    pub fn is_stress(&self, s: &[S], tol: f64) -> bool {
        let m = self.equations();
        let scale = m.max_abs() * s.iter().map(|x| x.abs_f64()).fold(0.0, f64::max);
        m.mul_vec(s).iter().all(|x| x.negligible(scale, tol))
    }
}

/// Basis of edge coefficients satisfying the weaving equations.
pub fn weaving_stress_basis<S: Scalar>(w: &Weaving<S>, rel_threshold: f64) -> Vec<Vec<S>> {
    S::rank_kernel(&w.equations(), rel_threshold).kernel
}

/// Weaving of a configuration's lines: an edge `(j, k)`, `j < k`, for
/// every pair of lines through a common configuration point.
pub fn configuration_weaving<S: Scalar>(r: &Realization<S>) -> Result<Weaving<S>> {
    let g = r.geometry();
    let mut edges = Vec::new();
    for p in 0..g.num_points() {
        let mut ls = g.lines_through(p);
        ls.sort_unstable();
        for a in 0..ls.len() {
            for b in a + 1..ls.len() {
                if !edges.contains(&(ls[a], ls[b])) {
                    edges.push((ls[a], ls[b]));
                }
            }
        }
    }
    Weaving::new(r.lines().to_vec(), edges, g.lines(), r.tolerance())
}

/// Restricts a configuration stress to the weaving of its lines. At each
/// point the lowest-index line `j0` through it is joined to every other
/// line `j` there with `s_{j0 j} = -ω_{p j}`.
pub fn restrict_to_weaving<S: Scalar>(g: &IncidenceGeometry, w: &Weaving<S>, omega: &[S]) -> Vec<S> {
    let mut s = vec![S::zero(); w.edges.len()];
    for p in 0..g.num_points() {
        let ls = g.lines_through(p);
        let Some(&j0) = ls.iter().min() else {
            continue;
        };
        for &j in ls.iter().filter(|&&j| j != j0) {
            let k = g.incidence_index(p, j).expect("line through point");
            if let Some(e) = w.edges.iter().position(|&x| x == (j0, j)) {
                s[e] = s[e].clone() - omega[k].clone();
            }
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    #[test]
    fn single_edge_weaving_has_no_stress() {
        let lines = vec![[q(1), q(0), q(1)], [q(0), q(1), q(1)]];
        let names = vec!["a".to_string(), "b".to_string()];
        let w = Weaving::new(lines, vec![(0, 1)], &names, 0.0).unwrap();
        assert_eq!(w.crossings[0], [q(-1), q(-1), q(1)]);
        assert!(weaving_stress_basis(&w, 0.0).is_empty());
    }

    #[test]
    fn parallel_edge_is_rejected() {
        let lines = vec![[q(1), q(0), q(1)], [q(2), q(0), q(1)]];
        let names = vec!["a".to_string(), "b".to_string()];
        let e = Weaving::new(lines, vec![(0, 1)], &names, 0.0).unwrap_err();
        assert_eq!(e, Error::ParallelLines("a".into(), "b".into()));
    }

    #[test]
    fn zero_stress_is_in_equilibrium() {
        let g = IncidenceGeometry::new(["p"], ["l"], &[("p", "l")]).unwrap();
        let r = Realization::new(g, vec![[q(1), q(0), q(1)]], vec![[q(-1), q(0), q(1)]]).unwrap();
        assert!(verify_equilibrium(&r, &[q(0)]));
        assert!(!verify_equilibrium(&r, &[q(1)]));
    }

    #[test]
    fn first_nonzero_normalization() {
        let v = normalize_first_nonzero(&[q(0), q(-2), q(4)], 0.0);
        assert_eq!(v, vec![q(0), q(1), q(-2)]);
    }
}
