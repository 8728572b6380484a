//! Finite correlation groups, orbits of points and lines, and the orbit
//! rigidity matrix.
//!
//! A correlation is stored as an orthogonal matrix `A` acting on every
//! coordinate vector, points and lines alike, together with a flag saying
//! whether it swaps points and lines. Orthogonality makes `A^{-T} = A`, so
//! collineations act on lines by the same matrix, and incidences are kept
//! because `(A l)·(A p) = l·p`.
//!
//! Velocities live in the affine chart. A correlation acts on the chart
//! velocity at an element `e` through the derivative of its chart map at
//! `e`, a constant 2x2 matrix per pair `(γ, e)`.

use crate::error::{Error, Result};
use crate::linalg::intersection_dim;
use crate::matrix::{span_rank, Matrix};
use crate::realization::{mat3_vec, same_projective, Chart, Realization, Vec3};
use crate::rigidity::{self, line_column, point_column, RigidityMatrix};
use crate::scalar::Scalar;

/// Default cap on the size of a generated group.
pub const GROUP_CAP: usize = 120;

const FLOAT_MATRIX_TOLERANCE: f64 = 1e-9;
const ORTHOGONALITY_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct Correlation<S> {
    /// Orthogonal, scaled to determinant +1.
    pub matrix: Matrix<S>,
    pub polarity: bool,
}

fn is_orthogonal<S: Scalar>(m: &Matrix<S>) -> bool {
    let p = m.transpose().mul(m);
    let id = Matrix::<S>::identity(3);
    (0..3).all(|i| {
        (0..3).all(|j| {
            let d = p[(i, j)].clone() - id[(i, j)].clone();
            d.negligible(1.0, ORTHOGONALITY_TOLERANCE)
        })
    })
}

fn canonical_sign<S: Scalar>(m: Matrix<S>) -> Matrix<S> {
    if crate::realization::det3(&m).is_negative() {
        m.map(|x| -x.clone())
    } else {
        m
    }
}

fn matrices_equal<S: Scalar>(a: &Matrix<S>, b: &Matrix<S>) -> bool {
    if S::EXACT {
        a == b
    } else {
        (0..3).all(|i| (0..3).all(|j| (a[(i, j)].to_f64() - b[(i, j)].to_f64()).abs() <= FLOAT_MATRIX_TOLERANCE))
    }
}

impl<S: Scalar> Correlation<S> {
    pub fn identity() -> Self {
        Correlation {
            matrix: Matrix::identity(3),
            polarity: false,
        }
    }

    /// A collineation given by an orthogonal matrix.
    pub fn collineation(matrix: Matrix<S>) -> Result<Self> {
        Self::new(matrix, false)
    }

    /// A polarity sending the point `p` to the line `p Q`, that is the
    /// column vector `Qᵀ p`.
    pub fn polarity(q: Matrix<S>) -> Result<Self> {
        Self::new(q.transpose(), true)
    }

    /// Builds from the matrix acting on column vectors.
    pub fn new(matrix: Matrix<S>, polarity: bool) -> Result<Self> {
        if matrix.rows() != 3 || matrix.cols() != 3 {
            return Err(Error::Dimension {
                expected: 3,
                found: matrix.rows().max(matrix.cols()),
            });
        }
        if !is_orthogonal(&matrix) {
            return Err(Error::NotOrthogonal);
        }
        Ok(Correlation {
            matrix: canonical_sign(matrix),
            polarity,
        })
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        Correlation {
            matrix: canonical_sign(self.matrix.mul(&other.matrix)),
            polarity: self.polarity ^ other.polarity,
        }
    }

    pub fn inverse(&self) -> Self {
        Correlation {
            matrix: self.matrix.transpose(),
            polarity: self.polarity,
        }
    }

    pub fn same_as(&self, other: &Self) -> bool {
        self.polarity == other.polarity && matrices_equal(&self.matrix, &other.matrix)
    }

    pub fn apply(&self, v: &Vec3<S>) -> Vec3<S> {
        mat3_vec(&self.matrix, v)
    }

    /// Projectively fixed points of a collineation: the eigenspaces of its
    /// matrix for eigenvalues `+1` and `-1`, each returned as a basis.
    pub fn fixed_subspace(&self, rel_threshold: f64) -> Result<Vec<Vec<Vec<S>>>> {
        if self.polarity {
            return Err(Error::PolarityFixedSubspace);
        }
        let id = Matrix::<S>::identity(3);
        let mut out = Vec::new();
        for sign in [S::one(), -S::one()] {
            let shifted = Matrix::from_rows(
                3,
                &(0..3)
                    .map(|i| {
                        (0..3)
                            .map(|j| self.matrix[(i, j)].clone() - sign.clone() * id[(i, j)].clone())
                            .collect()
                    })
                    .collect::<Vec<_>>(),
            );
            let k = S::rank_kernel(&shifted, rel_threshold).kernel;
            if !k.is_empty() {
                out.push(k);
            }
        }
        Ok(out)
    }
}

/// A finite group of correlations, identity first.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationGroup<S> {
    elements: Vec<Correlation<S>>,
    table: Vec<Vec<usize>>,
}

impl<S: Scalar> CorrelationGroup<S> {
    pub fn trivial() -> Self {
        Self::generate(&[], GROUP_CAP).expect("trivial group")
    }

    /// Closure of the generators under composition.
    pub fn generate(generators: &[Correlation<S>], cap: usize) -> Result<Self> {
        let mut elements = vec![Correlation::identity()];
        let find = |els: &[Correlation<S>], c: &Correlation<S>| els.iter().position(|e| e.same_as(c));
        for g in generators {
            if find(&elements, g).is_none() {
                elements.push(g.clone());
            }
        }
        let mut i = 0;
        while i < elements.len() {
            for j in 0..elements.len() {
                for c in [elements[i].compose(&elements[j]), elements[j].compose(&elements[i])] {
                    if find(&elements, &c).is_none() {
                        elements.push(c);
                        if elements.len() > cap {
                            return Err(Error::GroupTooLarge(cap));
                        }
                    }
                }
            }
            i += 1;
        }
        let table = elements
            .iter()
            .map(|a| {
                elements
                    .iter()
                    .map(|b| find(&elements, &a.compose(b)).expect("closed"))
                    .collect()
            })
            .collect();
        Ok(CorrelationGroup { elements, table })
    }

    pub fn elements(&self) -> &[Correlation<S>] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Index of `a ∘ b`.
    pub fn product(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inverse_index(&self, a: usize) -> usize {
        (0..self.len()).find(|&b| self.table[a][b] == 0).expect("inverse exists")
    }
}

/// Elements are indexed points first, then lines.
fn element_coords<S: Scalar>(r: &Realization<S>, e: usize) -> &Vec3<S> {
    let np = r.geometry().num_points();
    if e < np {
        r.point(e)
    } else {
        r.line(e - np)
    }
}

fn element_name<S: Scalar>(r: &Realization<S>, e: usize) -> String {
    let g = r.geometry();
    if e < g.num_points() {
        g.points()[e].clone()
    } else {
        g.lines()[e - g.num_points()].clone()
    }
}

/// Permutations of elements and incidences induced by each group element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAction {
    pub element_perms: Vec<Vec<usize>>,
    pub incidence_perms: Vec<Vec<usize>>,
}

/// Checks that every group element permutes the realized points and lines
/// and preserves incidences, recording the induced permutations.
pub fn group_action<S: Scalar>(r: &Realization<S>, group: &CorrelationGroup<S>) -> Result<GroupAction> {
    let g = r.geometry();
    let (np, nl) = (g.num_points(), g.num_lines());
    let n = np + nl;
    let tol = r.tolerance();
    let mut element_perms = Vec::with_capacity(group.len());
    let mut incidence_perms = Vec::with_capacity(group.len());
    for (gi, c) in group.elements().iter().enumerate() {
        let mut perm = Vec::with_capacity(n);
        for e in 0..n {
            let image = c.apply(element_coords(r, e));
            let is_point = (e < np) ^ c.polarity;
            let range = if is_point { 0..np } else { np..n };
            let target = range
                .clone()
                .find(|&f| same_projective(&image, element_coords(r, f), tol))
                .ok_or_else(|| {
                    Error::NotPreserved(format!("element {gi} sends `{}` outside the configuration", element_name(r, e)))
                })?;
            perm.push(target);
        }
        let mut sorted = perm.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != n {
            return Err(Error::NotPreserved(format!("element {gi} is not a bijection")));
        }
        let mut iperm = Vec::with_capacity(g.num_incidences());
        for &(p, l) in g.incidences() {
            let (a, b) = (perm[p], perm[np + l]);
            let (pp, ll) = if c.polarity { (b, a - np) } else { (a, b - np) };
            let k = g.incidence_index(pp, ll).ok_or_else(|| {
                Error::NotPreserved(format!(
                    "element {gi} breaks incidence ({}, {})",
                    g.points()[p],
                    g.lines()[l]
                ))
            })?;
            iperm.push(k);
        }
        element_perms.push(perm);
        incidence_perms.push(iperm);
    }
    Ok(GroupAction {
        element_perms,
        incidence_perms,
    })
}

pub fn check_group_preserves<S: Scalar>(r: &Realization<S>, group: &CorrelationGroup<S>) -> bool {
    group_action(r, group).is_ok()
}

pub type Jacobian<S> = [[S; 2]; 2];

/// Derivative at chart coordinates `(u, v)` of the chart map induced by
/// the matrix `a`: with `w = a (u, v, 1)`,
/// `J_ij = (a_ij w_3 - w_i a_3j) / w_3²`.
pub fn chart_jacobian<S: Scalar>(a: &Matrix<S>, uv: &[S; 2]) -> Jacobian<S> {
    let w = mat3_vec(a, &[uv[0].clone(), uv[1].clone(), S::one()]);
    let w3 = w[2].clone();
    let w3sq = w3.clone() * w3.clone();
    let entry = |i: usize, j: usize| (a[(i, j)].clone() * w3.clone() - w[i].clone() * a[(2, j)].clone()) / w3sq.clone();
    [[entry(0, 0), entry(0, 1)], [entry(1, 0), entry(1, 1)]]
}

fn jac_mul_vec<S: Scalar>(j: &Jacobian<S>, v: &[S]) -> [S; 2] {
    [
        j[0][0].clone() * v[0].clone() + j[0][1].clone() * v[1].clone(),
        j[1][0].clone() * v[0].clone() + j[1][1].clone() * v[1].clone(),
    ]
}

fn chart_of<S: Scalar>(chart: &Chart<S>, np: usize, e: usize) -> &[S; 2] {
    if e < np {
        &chart.points[e]
    } else {
        &chart.lines[e - np]
    }
}

/// Orbits of elements and incidences, with the data needed to move chart
/// velocities around an orbit.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitStructure<S> {
    pub num_points: usize,
    pub num_lines: usize,
    /// Each orbit lists its elements in index order; the first is the
    /// representative.
    pub element_orbits: Vec<Vec<usize>>,
    pub orbit_of: Vec<usize>,
    /// Lowest-index group element sending the representative to `e`.
    pub carrier: Vec<usize>,
    /// Chart derivative of the carrier at the representative.
    pub transport: Vec<Jacobian<S>>,
    /// `2 x dim(U_r)` basis of stabilizer-fixed chart velocities per orbit.
    pub bases: Vec<Matrix<S>>,
    /// Column offset of each orbit's block in the orbit matrix.
    pub offsets: Vec<usize>,
    pub incidence_orbits: Vec<Vec<usize>>,
    /// Group elements, kept for re-expanding reduced coordinates.
    pub group_matrices: Vec<Matrix<S>>,
}

impl<S: Scalar> OrbitStructure<S> {
    pub fn representative(&self, orbit: usize) -> usize {
        self.element_orbits[orbit][0]
    }

    pub fn num_columns(&self) -> usize {
        self.bases.iter().map(|b| b.cols()).sum()
    }

    pub fn full_columns(&self) -> usize {
        2 * (self.num_points + self.num_lines)
    }

    /// Column of element `e` in the full rigidity matrix.
    pub fn full_column(&self, e: usize) -> usize {
        if e < self.num_points {
            point_column(self.num_lines, e)
        } else {
            line_column(e - self.num_points)
        }
    }

    /// `m(e) = J_e M_rep m̂(rep)` for every element.
    pub fn lift(&self, m_hat: &[S]) -> Vec<S> {
        let mut out = vec![S::zero(); self.full_columns()];
        for (o, orbit) in self.element_orbits.iter().enumerate() {
            let basis = &self.bases[o];
            let block = &m_hat[self.offsets[o]..self.offsets[o] + basis.cols()];
            let at_rep = basis.mul_vec(block);
            for &e in orbit {
                let v = jac_mul_vec(&self.transport[e], &at_rep);
                let c = self.full_column(e);
                out[c] = v[0].clone();
                out[c + 1] = v[1].clone();
            }
        }
        out
    }

    /// Inverse of [`lift`](Self::lift) on its image: solves
    /// `M_rep m̂(rep) = m(rep)` per orbit.
    pub fn restrict(&self, m: &[S], rel_threshold: f64) -> Result<Vec<S>> {
        let mut out = Vec::with_capacity(self.num_columns());
        for (o, basis) in self.bases.iter().enumerate() {
            let rep = self.representative(o);
            let c = self.full_column(rep);
            if basis.cols() == 0 {
                continue;
            }
            let x = S::solve(basis, &[m[c].clone(), m[c + 1].clone()], rel_threshold)
                .ok_or_else(|| Error::Stabilizer(format!("orbit {o}")))?;
            out.extend(x);
        }
        Ok(out)
    }
}

/// Builds orbits, carriers, chart transports and stabilizer bases.
pub fn orbit_structure<S: Scalar>(
    r: &Realization<S>,
    group: &CorrelationGroup<S>,
    rel_threshold: f64,
) -> Result<OrbitStructure<S>> {
    let action = group_action(r, group)?;
    let chart = r.affine_chart()?;
    let g = r.geometry();
    let (np, nl) = (g.num_points(), g.num_lines());
    let n = np + nl;

    let mut orbit_of = vec![usize::MAX; n];
    let mut element_orbits: Vec<Vec<usize>> = Vec::new();
    for e in 0..n {
        if orbit_of[e] != usize::MAX {
            continue;
        }
        let mut orbit: Vec<usize> = action.element_perms.iter().map(|p| p[e]).collect();
        orbit.sort_unstable();
        orbit.dedup();
        for &f in &orbit {
            orbit_of[f] = element_orbits.len();
        }
        element_orbits.push(orbit);
    }

    let mut carrier = vec![0; n];
    let mut transport = Vec::with_capacity(n);
    for e in 0..n {
        let rep = element_orbits[orbit_of[e]][0];
        let gi = (0..group.len())
            .find(|&gi| action.element_perms[gi][rep] == e)
            .ok_or_else(|| Error::Stabilizer(element_name(r, e)))?;
        carrier[e] = gi;
        transport.push(chart_jacobian(&group.elements()[gi].matrix, chart_of(&chart, np, rep)));
    }

    let mut bases = Vec::with_capacity(element_orbits.len());
    let mut offsets = Vec::with_capacity(element_orbits.len());
    let mut offset = 0;
    for orbit in &element_orbits {
        let rep = orbit[0];
        let uv = chart_of(&chart, np, rep);
        let mut rows: Vec<Vec<S>> = Vec::new();
        for (gi, c) in group.elements().iter().enumerate() {
            if gi == 0 || action.element_perms[gi][rep] != rep {
                continue;
            }
            let j = chart_jacobian(&c.matrix, uv);
            for i in 0..2 {
                let mut row = vec![j[i][0].clone(), j[i][1].clone()];
                row[i] = row[i].clone() - S::one();
                rows.push(row);
            }
        }
        let basis = if rows.is_empty() {
            Matrix::identity(2)
        } else {
            let k = S::rank_kernel(&Matrix::from_rows(2, &rows), rel_threshold).kernel;
            Matrix::from_columns(2, &k)
        };
        offsets.push(offset);
        offset += basis.cols();
        bases.push(basis);
    }

    let ni = g.num_incidences();
    let mut inc_seen = vec![false; ni];
    let mut incidence_orbits = Vec::new();
    for k in 0..ni {
        if inc_seen[k] {
            continue;
        }
        let mut orbit: Vec<usize> = action.incidence_perms.iter().map(|p| p[k]).collect();
        orbit.sort_unstable();
        orbit.dedup();
        for &f in &orbit {
            inc_seen[f] = true;
        }
        // Keep the seed incidence first so it is the orbit's row.
        orbit.retain(|&f| f != k);
        orbit.insert(0, k);
        incidence_orbits.push(orbit);
    }

    Ok(OrbitStructure {
        num_points: np,
        num_lines: nl,
        element_orbits,
        orbit_of,
        carrier,
        transport,
        bases,
        offsets,
        incidence_orbits,
        group_matrices: group.elements().iter().map(|c| c.matrix.clone()).collect(),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrbitRigidityMatrix<S> {
    pub matrix: Matrix<S>,
    pub structure: OrbitStructure<S>,
}

/// One row per incidence orbit, built from the orbit's first incidence
/// `(P, L)`: `(a_L, b_L) J_P M_{rep P}` in the block of `P`'s orbit and
/// `(x_P, y_P) J_L M_{rep L}` in the block of `L`'s orbit, added when the
/// two orbits coincide.
pub fn build_orbit_matrix<S: Scalar>(
    r: &Realization<S>,
    group: &CorrelationGroup<S>,
    rel_threshold: f64,
) -> Result<OrbitRigidityMatrix<S>> {
    let structure = orbit_structure(r, group, rel_threshold)?;
    let chart = r.affine_chart()?;
    let g = r.geometry();
    let np = g.num_points();
    let mut m: Matrix<S> = Matrix::zeros(structure.incidence_orbits.len(), structure.num_columns());
    for (row, orbit) in structure.incidence_orbits.iter().enumerate() {
        let (p, l) = g.incidences()[orbit[0]];
        let le = np + l;
        let terms = [(p, chart.lines[l].clone()), (le, chart.points[p].clone())];
        for (e, coeff) in terms {
            let o = structure.orbit_of[e];
            let basis = &structure.bases[o];
            let j = &structure.transport[e];
            // coeffᵀ J
            let cj = [
                coeff[0].clone() * j[0][0].clone() + coeff[1].clone() * j[1][0].clone(),
                coeff[0].clone() * j[0][1].clone() + coeff[1].clone() * j[1][1].clone(),
            ];
            for col in 0..basis.cols() {
                let v = cj[0].clone() * basis[(0, col)].clone() + cj[1].clone() * basis[(1, col)].clone();
                let c = structure.offsets[o] + col;
                m[(row, c)] = m[(row, c)].clone() + v;
            }
        }
    }
    Ok(OrbitRigidityMatrix { matrix: m, structure })
}

impl<S: Scalar> OrbitRigidityMatrix<S> {
    pub fn kernel(&self, rel_threshold: f64) -> Vec<Vec<S>> {
        S::rank_kernel(&self.matrix, rel_threshold).kernel
    }

    /// Row labels `(point, line)` of each orbit's first incidence.
    pub fn row_labels(&self, r: &Realization<S>) -> Vec<String> {
        self.structure
            .incidence_orbits
            .iter()
            .map(|o| {
                let (p, l) = r.geometry().incidence_label(o[0]);
                format!("({p},{l})")
            })
            .collect()
    }

    /// Column labels `name[k]` for the `k`-th basis column of each orbit.
    pub fn column_labels(&self, r: &Realization<S>) -> Vec<String> {
        let mut out = Vec::new();
        for (o, b) in self.structure.bases.iter().enumerate() {
            let name = element_name(r, self.structure.representative(o));
            for k in 0..b.cols() {
                out.push(format!("{name}[{k}]"));
            }
        }
        out
    }
}

/// Summary of a symmetric analysis.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricAnalysis<S> {
    pub orbit_matrix: OrbitRigidityMatrix<S>,
    pub kernel: Vec<Vec<S>>,
    pub lifted: Vec<Vec<S>>,
    pub symmetric_trivial_dim: usize,
    pub nontrivial_symmetric_dim: usize,
    /// Largest entry of `M · lift(m̂)` over the kernel basis.
    pub max_lift_residual: f64,
    /// `true` when restricting each lifted vector gives back the input.
    pub round_trip: bool,
}

pub fn symmetric_analysis<S: Scalar>(
    r: &Realization<S>,
    group: &CorrelationGroup<S>,
    rel_threshold: f64,
) -> Result<SymmetricAnalysis<S>> {
    let om = build_orbit_matrix(r, group, rel_threshold)?;
    let kernel = om.kernel(rel_threshold);
    let full: RigidityMatrix<S> = rigidity::build_rigidity_matrix(r)?;
    let lifted: Vec<Vec<S>> = kernel.iter().map(|k| om.structure.lift(k)).collect();
    let max_lift_residual = lifted
        .iter()
        .flat_map(|v| full.matrix.mul_vec(v))
        .map(|x| x.abs_f64())
        .fold(0.0, f64::max);
    let round_trip = kernel.iter().zip(&lifted).all(|(k, v)| match om.structure.restrict(v, rel_threshold) {
        Ok(back) => back.iter().zip(k).all(|(a, b)| (a.clone() - b.clone()).negligible(1.0, 1e-9)),
        Err(_) => false,
    });
    let trivial = rigidity::trivial_motion_basis(r, rel_threshold)?;
    let dim = full.cols();
    let symmetric_trivial_dim = intersection_dim(dim, &trivial.vectors, &lifted, rel_threshold);
    let lifted_rank = span_rank(dim, &lifted, rel_threshold);
    Ok(SymmetricAnalysis {
        kernel,
        symmetric_trivial_dim,
        nontrivial_symmetric_dim: lifted_rank - symmetric_trivial_dim,
        max_lift_residual,
        round_trip,
        lifted,
        orbit_matrix: om,
    })
}

/// Dimension of the Γ-symmetric trivial motions.
pub fn symmetric_trivial_dimension<S: Scalar>(
    r: &Realization<S>,
    group: &CorrelationGroup<S>,
    rel_threshold: f64,
) -> Result<usize> {
    Ok(symmetric_analysis(r, group, rel_threshold)?.symmetric_trivial_dim)
}
