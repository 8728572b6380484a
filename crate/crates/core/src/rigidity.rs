//! The projective rigidity matrix, trivial motions and rigidity verdicts.

use crate::error::Result;
use crate::linalg::RankKernel;
use crate::matrix::{span_rank, Matrix};
use crate::realization::{Chart, Realization};
use crate::scalar::Scalar;

/// Relative singular value threshold used by the float backend.
pub const DEFAULT_RANK_THRESHOLD: f64 = 1e-9;

/// Rows follow incidences; columns are `[lines | points]`, two per element.
#[derive(Clone, Debug, PartialEq)]
pub struct RigidityMatrix<S> {
    pub matrix: Matrix<S>,
    pub num_lines: usize,
    pub num_points: usize,
}

impl<S: Scalar> RigidityMatrix<S> {
    pub fn line_column(&self, i: usize) -> usize {
        line_column(i)
    }

    pub fn point_column(&self, j: usize) -> usize {
        point_column(self.num_lines, j)
    }

    pub fn rows(&self) -> usize {
        self.matrix.rows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.cols()
    }

    pub fn rank_and_kernel(&self, rel_threshold: f64) -> RankKernel<S> {
        S::rank_kernel(&self.matrix, rel_threshold)
    }

    /// Column labels such as `da(l1)` and `dy(p3)`.
    pub fn column_labels(&self, lines: &[String], points: &[String]) -> Vec<String> {
        let mut out = Vec::with_capacity(self.cols());
        for l in lines {
            out.push(format!("da({l})"));
            out.push(format!("db({l})"));
        }
        for p in points {
            out.push(format!("dx({p})"));
            out.push(format!("dy({p})"));
        }
        out
    }
}

/// Column index of line `i` in the `[lines | points]` layout.
pub fn line_column(i: usize) -> usize {
    2 * i
}

/// Column index of point `j` given the number of lines.
pub fn point_column(num_lines: usize, j: usize) -> usize {
    2 * num_lines + 2 * j
}

/// Fills the rigidity matrix from chart coordinates.
pub fn matrix_from_chart<S: Scalar>(
    incidences: &[(usize, usize)],
    chart: &Chart<S>,
) -> RigidityMatrix<S> {
    let (nl, np) = (chart.lines.len(), chart.points.len());
    let mut m = Matrix::zeros(incidences.len(), 2 * nl + 2 * np);
    for (row, &(j, i)) in incidences.iter().enumerate() {
        let lc = line_column(i);
        let pc = point_column(nl, j);
        m[(row, lc)] = chart.points[j][0].clone();
        m[(row, lc + 1)] = chart.points[j][1].clone();
        m[(row, pc)] = chart.lines[i][0].clone();
        m[(row, pc + 1)] = chart.lines[i][1].clone();
    }
    RigidityMatrix {
        matrix: m,
        num_lines: nl,
        num_points: np,
    }
}

pub fn build_rigidity_matrix<S: Scalar>(r: &Realization<S>) -> Result<RigidityMatrix<S>> {
    let chart = r.affine_chart()?;
    Ok(matrix_from_chart(r.geometry().incidences(), &chart))
}

/// The traceless basis `E11-E33, E22-E33, E12, E13, E21, E23, E31, E32`.
pub fn lie_algebra_basis<S: Scalar>() -> Vec<Matrix<S>> {
    let unit = |i: usize, j: usize| {
        let mut m = Matrix::zeros(3, 3);
        m[(i, j)] = S::one();
        m
    };
    let diag = |i: usize| {
        let mut m = unit(i, i);
        m[(2, 2)] = -S::one();
        m
    };
    vec![
        diag(0),
        diag(1),
        unit(0, 1),
        unit(0, 2),
        unit(1, 0),
        unit(1, 2),
        unit(2, 0),
        unit(2, 1),
    ]
}

/// Chart velocity induced by the infinitesimal transformation `A`.
pub fn trivial_motion<S: Scalar>(a: &Matrix<S>, chart: &Chart<S>) -> Vec<S> {
    let (nl, np) = (chart.lines.len(), chart.points.len());
    let mut v = vec![S::zero(); 2 * nl + 2 * np];
    let at = a.transpose();
    for (i, l) in chart.lines.iter().enumerate() {
        let u = at.mul_vec(&[l[0].clone(), l[1].clone(), S::one()]);
        v[line_column(i)] = -u[0].clone() + l[0].clone() * u[2].clone();
        v[line_column(i) + 1] = -u[1].clone() + l[1].clone() * u[2].clone();
    }
    for (j, p) in chart.points.iter().enumerate() {
        let w = a.mul_vec(&[p[0].clone(), p[1].clone(), S::one()]);
        v[point_column(nl, j)] = w[0].clone() - p[0].clone() * w[2].clone();
        v[point_column(nl, j) + 1] = w[1].clone() - p[1].clone() * w[2].clone();
    }
    v
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrivialMotions<S> {
    pub vectors: Vec<Vec<S>>,
    pub span_dim: usize,
}

pub fn trivial_motion_basis<S: Scalar>(r: &Realization<S>, rel_threshold: f64) -> Result<TrivialMotions<S>> {
    let chart = r.affine_chart()?;
    Ok(trivial_motions_from_chart(&chart, rel_threshold))
}

pub fn trivial_motions_from_chart<S: Scalar>(chart: &Chart<S>, rel_threshold: f64) -> TrivialMotions<S> {
    let vectors: Vec<Vec<S>> = lie_algebra_basis()
        .iter()
        .map(|a| trivial_motion(a, chart))
        .collect();
    let dim = 2 * (chart.lines.len() + chart.points.len());
    let span_dim = span_rank(dim, &vectors, rel_threshold);
    TrivialMotions { vectors, span_dim }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    InfinitesimallyRigid,
    Flexible { nontrivial_dim: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct RigidityAnalysis<S> {
    pub rows: usize,
    pub cols: usize,
    pub rank: usize,
    pub nullity: usize,
    pub trivial_span: usize,
    pub nontrivial_dim: usize,
    pub verdict: Verdict,
    /// `rank == 2|P| + 2|L| - 8`; meaningful only when `trivial_span == 8`.
    pub statically_rigid: Option<bool>,
    pub kernel: Vec<Vec<S>>,
    pub singular_values: Option<Vec<f64>>,
    /// `σ_rank / σ_{rank+1}` for the float backend.
    pub gap: Option<f64>,
}

pub fn analyze<S: Scalar>(r: &Realization<S>, rel_threshold: f64) -> Result<(RigidityMatrix<S>, RigidityAnalysis<S>)> {
    let chart = r.affine_chart()?;
    let m = matrix_from_chart(r.geometry().incidences(), &chart);
    let rk = m.rank_and_kernel(rel_threshold);
    let trivial = trivial_motions_from_chart(&chart, rel_threshold);
    let nullity = rk.nullity();
    let nontrivial_dim = nullity.saturating_sub(trivial.span_dim);
    let verdict = if nontrivial_dim == 0 {
        Verdict::InfinitesimallyRigid
    } else {
        Verdict::Flexible { nontrivial_dim }
    };
    let gap = rk.gap();
    let analysis = RigidityAnalysis {
        rows: m.rows(),
        cols: m.cols(),
        rank: rk.rank,
        nullity,
        trivial_span: trivial.span_dim,
        nontrivial_dim,
        verdict,
        statically_rigid: (trivial.span_dim == 8).then(|| rk.rank + 8 == m.cols()),
        kernel: rk.kernel,
        singular_values: rk.singular_values,
        gap,
    };
    Ok((m, analysis))
}

pub fn rigidity_verdict<S: Scalar>(r: &Realization<S>, rel_threshold: f64) -> Result<Verdict> {
    Ok(analyze(r, rel_threshold)?.1.verdict)
}

/// Rigidity matrix with the columns of four pinned points removed.
#[derive(Clone, Debug, PartialEq)]
pub struct PinnedMatrix<S> {
    pub matrix: Matrix<S>,
    /// Original column index of each kept column.
    pub kept_columns: Vec<usize>,
}

impl<S: Scalar> PinnedMatrix<S> {
    /// Expands a reduced vector to full length with zeros at pinned columns.
    pub fn expand(&self, v: &[S], full_cols: usize) -> Vec<S> {
        let mut out = vec![S::zero(); full_cols];
        for (k, &c) in self.kept_columns.iter().enumerate() {
            out[c] = v[k].clone();
        }
        out
    }

    pub fn restrict(&self, v: &[S]) -> Vec<S> {
        self.kept_columns.iter().map(|&c| v[c].clone()).collect()
    }
}

pub fn pin<S: Scalar>(r: &Realization<S>, pins: &[&str]) -> Result<PinnedMatrix<S>> {
    let idx = pins
        .iter()
        .map(|id| r.geometry().point_index(id))
        .collect::<Result<Vec<_>>>()?;
    pin_indices(r, &idx)
}

pub fn pin_indices<S: Scalar>(r: &Realization<S>, pins: &[usize]) -> Result<PinnedMatrix<S>> {
    r.check_general_position(pins)?;
    let m = build_rigidity_matrix(r)?;
    let nl = r.geometry().num_lines();
    let pinned: Vec<usize> = pins
        .iter()
        .flat_map(|&j| [point_column(nl, j), point_column(nl, j) + 1])
        .collect();
    let kept_columns: Vec<usize> = (0..m.cols()).filter(|c| !pinned.contains(c)).collect();
    Ok(PinnedMatrix {
        matrix: m.matrix.select_columns(&kept_columns),
        kept_columns,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::IncidenceGeometry;
    use crate::scalar::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    #[test]
    fn single_incidence_row() {
        let g = IncidenceGeometry::new(["p"], ["l"], &[("p", "l")]).unwrap();
        let r = Realization::new(g, vec![[q(1), q(0), q(1)]], vec![[q(-1), q(0), q(1)]]).unwrap();
        let m = build_rigidity_matrix(&r).unwrap();
        assert_eq!(m.matrix.as_rows(), vec![vec![q(1), q(0), q(-1), q(0)]]);
        let t = trivial_motion_basis(&r, 0.0).unwrap();
        for v in &t.vectors {
            assert!(m.matrix.mul_vec(v).iter().all(|x| x == &q(0)));
        }
    }

    #[test]
    fn no_incidences_full_kernel() {
        let g = IncidenceGeometry::new(["p"], ["l"], &[] as &[(&str, &str)]).unwrap();
        let r = Realization::new(g, vec![[q(1), q(2), q(1)]], vec![[q(3), q(1), q(1)]]).unwrap();
        let (m, a) = analyze(&r, 0.0).unwrap();
        assert_eq!(m.rows(), 0);
        assert_eq!((a.rank, a.nullity), (0, 4));
    }

    #[test]
    fn coincident_points_shrink_trivial_span() {
        let g = IncidenceGeometry::new(["a", "b", "c"], Vec::<String>::new(), &[] as &[(&str, &str)]).unwrap();
        let p = [q(1), q(1), q(1)];
        let r = Realization::new(g, vec![p.clone(), p.clone(), p], vec![]).unwrap();
        let t = trivial_motion_basis(&r, 0.0).unwrap();
        assert!(t.span_dim < 8);
        assert_eq!(t.span_dim, 2);
    }
}
