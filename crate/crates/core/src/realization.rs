//! Homogeneous coordinates, incidence checks and projective transformations.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::IncidenceGeometry;
use crate::matrix::Matrix;
use crate::scalar::Scalar;

pub type Vec3<S> = [S; 3];

pub const DEFAULT_TOLERANCE: f64 = 1e-9;
/// Per-coordinate tolerance for coincidence of normalized floats.
pub const COINCIDENCE_TOLERANCE: f64 = 1e-7;

pub fn dot3<S: Scalar>(a: &Vec3<S>, b: &Vec3<S>) -> S {
    a[0].clone() * b[0].clone() + a[1].clone() * b[1].clone() + a[2].clone() * b[2].clone()
}

pub fn cross3<S: Scalar>(a: &Vec3<S>, b: &Vec3<S>) -> Vec3<S> {
    [
        a[1].clone() * b[2].clone() - a[2].clone() * b[1].clone(),
        a[2].clone() * b[0].clone() - a[0].clone() * b[2].clone(),
        a[0].clone() * b[1].clone() - a[1].clone() * b[0].clone(),
    ]
}

pub fn norm3<S: Scalar>(v: &Vec3<S>) -> f64 {
    v.iter().map(|x| x.to_f64().powi(2)).sum::<f64>().sqrt()
}

pub fn scale3<S: Scalar>(v: &Vec3<S>, s: &S) -> Vec3<S> {
    [v[0].clone() * s.clone(), v[1].clone() * s.clone(), v[2].clone() * s.clone()]
}

fn negligible3<S: Scalar>(x: &S, v: &Vec3<S>, tol: f64) -> bool {
    x.negligible(norm3(v), tol)
}

/// Index of the last coordinate that is not negligible.
fn last_nonzero<S: Scalar>(v: &Vec3<S>, tol: f64) -> Option<usize> {
    (0..3).rev().find(|&i| !negligible3(&v[i], v, tol))
}

/// Scales so the last nonzero coordinate is 1. Returns the factor `λ`
/// with `v = λ · normalize(v)`.
pub fn normalize_with_factor<S: Scalar>(v: &Vec3<S>, tol: f64) -> Option<(Vec3<S>, S)> {
    let i = last_nonzero(v, tol)?;
    let lambda = v[i].clone();
    let inv = S::one() / lambda.clone();
    let mut out = scale3(v, &inv);
    out[i] = S::one();
    for x in out.iter_mut().skip(i + 1) {
        *x = S::zero();
    }
    Some((out, lambda))
}

pub fn normalize<S: Scalar>(v: &Vec3<S>, tol: f64) -> Option<Vec3<S>> {
    normalize_with_factor(v, tol).map(|(v, _)| v)
}

/// Projective equality of two homogeneous vectors.
pub fn same_projective<S: Scalar>(a: &Vec3<S>, b: &Vec3<S>, tol: f64) -> bool {
    match (normalize(a, tol), normalize(b, tol)) {
        (Some(x), Some(y)) => {
            if S::EXACT {
                x == y
            } else {
                x.iter()
                    .zip(&y)
                    .all(|(p, q)| (p.to_f64() - q.to_f64()).abs() <= COINCIDENCE_TOLERANCE)
            }
        }
        _ => false,
    }
}

pub fn mat3_vec<S: Scalar>(m: &Matrix<S>, v: &Vec3<S>) -> Vec3<S> {
    let r = m.mul_vec(v);
    [r[0].clone(), r[1].clone(), r[2].clone()]
}

pub fn det3<S: Scalar>(m: &Matrix<S>) -> S {
    let a = |i, j| m[(i, j)].clone();
    a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1))
        - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0))
        + a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0))
}

/// Inverse by adjugate; `None` when singular.
pub fn inverse3<S: Scalar>(m: &Matrix<S>, tol: f64) -> Option<Matrix<S>> {
    let d = det3(m);
    if d.negligible(m.max_abs().powi(3), tol) {
        return None;
    }
    let a = |i: usize, j: usize| m[(i % 3, j % 3)].clone();
    let mut inv = Matrix::zeros(3, 3);
    for i in 0..3 {
        for j in 0..3 {
            // Cofactor of (j, i) via cyclic indices.
            let c = a(j + 1, i + 1) * a(j + 2, i + 2) - a(j + 1, i + 2) * a(j + 2, i + 1);
            inv[(i, j)] = c / d.clone();
        }
    }
    Some(inv)
}

/// An invertible 3x3 matrix acting on points by `T p` and on lines by
/// `T^{-T} l`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectiveTransform<S> {
    matrix: Matrix<S>,
    inverse: Matrix<S>,
}

impl<S: Scalar> ProjectiveTransform<S> {
    pub fn new(matrix: Matrix<S>) -> Result<Self> {
        if matrix.rows() != 3 || matrix.cols() != 3 {
            return Err(Error::Dimension {
                expected: 3,
                found: matrix.rows().max(matrix.cols()),
            });
        }
        let inverse = inverse3(&matrix, DEFAULT_TOLERANCE).ok_or(Error::SingularTransform)?;
        Ok(ProjectiveTransform { matrix, inverse })
    }

    pub fn from_rows(rows: [[S; 3]; 3]) -> Result<Self> {
        Self::new(Matrix::from_rows(3, &rows.map(|r| r.to_vec())))
    }

    pub fn identity() -> Self {
        Self::new(Matrix::identity(3)).expect("identity is invertible")
    }

    pub fn matrix(&self) -> &Matrix<S> {
        &self.matrix
    }

    pub fn inverse(&self) -> Self {
        ProjectiveTransform {
            matrix: self.inverse.clone(),
            inverse: self.matrix.clone(),
        }
    }

    pub fn apply_point(&self, p: &Vec3<S>) -> Vec3<S> {
        mat3_vec(&self.matrix, p)
    }

    pub fn apply_line(&self, l: &Vec3<S>) -> Vec3<S> {
        mat3_vec(&self.inverse.transpose(), l)
    }
}

/// A seeded random transform with small integer entries in `[-range, range]`.
pub fn random_integer_transform<S: Scalar>(rng: &mut impl Rng, range: i64) -> ProjectiveTransform<S> {
    loop {
        let rows: Vec<Vec<S>> = (0..3)
            .map(|_| (0..3).map(|_| S::from_i64(rng.gen_range(-range..=range))).collect())
            .collect();
        if let Ok(t) = ProjectiveTransform::new(Matrix::from_rows(3, &rows)) {
            return t;
        }
    }
}

/// Chart coordinates: `(x, y)` for `(x:y:1)` points and `(a, b)` for
/// `(a:b:1)` lines.
#[derive(Clone, Debug, PartialEq)]
pub struct Chart<S> {
    pub points: Vec<[S; 2]>,
    pub lines: Vec<[S; 2]>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DegeneracyReport {
    pub coincident_points: Vec<(usize, usize)>,
    pub coincident_lines: Vec<(usize, usize)>,
    pub points_at_infinity: Vec<usize>,
    pub lines_through_origin: Vec<usize>,
}

impl DegeneracyReport {
    pub fn is_clean(&self) -> bool {
        self.coincident_points.is_empty()
            && self.coincident_lines.is_empty()
            && self.points_at_infinity.is_empty()
            && self.lines_through_origin.is_empty()
    }
}

/// Coordinates for every point and line of a geometry.
#[derive(Clone, Debug, PartialEq)]
pub struct Realization<S> {
    geometry: IncidenceGeometry,
    points: Vec<Vec3<S>>,
    lines: Vec<Vec3<S>>,
    tolerance: f64,
}

impl<S: Scalar> Realization<S> {
    pub fn new(geometry: IncidenceGeometry, points: Vec<Vec3<S>>, lines: Vec<Vec3<S>>) -> Result<Self> {
        if points.len() != geometry.num_points() {
            return Err(Error::Dimension {
                expected: geometry.num_points(),
                found: points.len(),
            });
        }
        if lines.len() != geometry.num_lines() {
            return Err(Error::Dimension {
                expected: geometry.num_lines(),
                found: lines.len(),
            });
        }
        let zero = |v: &Vec3<S>| v.iter().all(|x| x.is_zero());
        for (i, p) in points.iter().enumerate() {
            if zero(p) {
                return Err(Error::ZeroVector(geometry.points()[i].clone()));
            }
        }
        for (i, l) in lines.iter().enumerate() {
            if zero(l) {
                return Err(Error::ZeroVector(geometry.lines()[i].clone()));
            }
        }
        Ok(Realization {
            geometry,
            points,
            lines,
            tolerance: DEFAULT_TOLERANCE,
        })
    }

    /// Builds from coordinates looked up by identifier.
    pub fn from_lookup(
        geometry: IncidenceGeometry,
        mut point: impl FnMut(&str) -> Option<Vec3<S>>,
        mut line: impl FnMut(&str) -> Option<Vec3<S>>,
    ) -> Result<Self> {
        let points = geometry
            .points()
            .iter()
            .map(|id| point(id).ok_or_else(|| Error::MissingCoordinate(id.clone())))
            .collect::<Result<Vec<_>>>()?;
        let lines = geometry
            .lines()
            .iter()
            .map(|id| line(id).ok_or_else(|| Error::MissingCoordinate(id.clone())))
            .collect::<Result<Vec<_>>>()?;
        Self::new(geometry, points, lines)
    }

    /// Builds from chart coordinates `(x, y)` and `(a, b)`.
    pub fn from_chart(geometry: IncidenceGeometry, chart: &Chart<S>) -> Result<Self> {
        let lift = |v: &[S; 2]| [v[0].clone(), v[1].clone(), S::one()];
        Self::new(
            geometry,
            chart.points.iter().map(lift).collect(),
            chart.lines.iter().map(lift).collect(),
        )
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn geometry(&self) -> &IncidenceGeometry {
        &self.geometry
    }

    pub fn point(&self, j: usize) -> &Vec3<S> {
        &self.points[j]
    }

    pub fn line(&self, i: usize) -> &Vec3<S> {
        &self.lines[i]
    }

    pub fn points(&self) -> &[Vec3<S>] {
        &self.points
    }

    pub fn lines(&self) -> &[Vec3<S>] {
        &self.lines
    }

    /// Copy with coordinates normalized so the last nonzero entry is 1.
    pub fn normalized(&self) -> Self {
        let n = |v: &Vec3<S>| normalize(v, self.tolerance).unwrap_or_else(|| v.clone());
        Realization {
            geometry: self.geometry.clone(),
            points: self.points.iter().map(n).collect(),
            lines: self.lines.iter().map(n).collect(),
            tolerance: self.tolerance,
        }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Realization<T> {
        let m = |v: &Vec3<S>| [f(&v[0]), f(&v[1]), f(&v[2])];
        Realization {
            geometry: self.geometry.clone(),
            points: self.points.iter().map(m).collect(),
            lines: self.lines.iter().map(m).collect(),
            tolerance: self.tolerance,
        }
    }

    pub fn to_f64(&self) -> Realization<f64> {
        self.map(|x| x.to_f64())
    }

    /// `l · p` for incidence `k`.
    pub fn incidence_product(&self, k: usize) -> S {
        let (p, l) = self.geometry.incidences()[k];
        dot3(&self.lines[l], &self.points[p])
    }

    /// Incidences whose equation fails: exactly in exact mode, and
    /// `|l·p| > tol · max(1, |l||p|)` in float mode.
    pub fn verify(&self) -> Vec<usize> {
        (0..self.geometry.num_incidences())
            .filter(|&k| {
                let (p, l) = self.geometry.incidences()[k];
                let scale = norm3(&self.lines[l]) * norm3(&self.points[p]);
                !self.incidence_product(k).negligible(scale, self.tolerance)
            })
            .collect()
    }

    /// Largest normalized incidence residual `|l·p| / (|l||p|)`.
    pub fn max_residual(&self) -> f64 {
        (0..self.geometry.num_incidences())
            .map(|k| {
                let (p, l) = self.geometry.incidences()[k];
                let scale = norm3(&self.lines[l]) * norm3(&self.points[p]);
                self.incidence_product(k).abs_f64() / scale.max(f64::MIN_POSITIVE)
            })
            .fold(0.0, f64::max)
    }

    pub fn apply_transform(&self, t: &ProjectiveTransform<S>) -> Result<Self> {
        let norm = |v: Vec3<S>| normalize(&v, self.tolerance).ok_or(Error::SingularTransform);
        Ok(Realization {
            geometry: self.geometry.clone(),
            points: self
                .points
                .iter()
                .map(|p| norm(t.apply_point(p)))
                .collect::<Result<_>>()?,
            lines: self
                .lines
                .iter()
                .map(|l| norm(t.apply_line(l)))
                .collect::<Result<_>>()?,
            tolerance: self.tolerance,
        })
    }

    fn at_infinity(&self, p: &Vec3<S>) -> bool {
        negligible3(&p[2], p, self.tolerance)
    }

    pub fn degeneracy_report(&self) -> DegeneracyReport {
        let tol = self.tolerance;
        let pairs = |vs: &[Vec3<S>]| {
            let mut out = Vec::new();
            for a in 0..vs.len() {
                for b in a + 1..vs.len() {
                    if same_projective(&vs[a], &vs[b], tol) {
                        out.push((a, b));
                    }
                }
            }
            out
        };
        DegeneracyReport {
            coincident_points: pairs(&self.points),
            coincident_lines: pairs(&self.lines),
            points_at_infinity: (0..self.points.len())
                .filter(|&j| self.at_infinity(&self.points[j]))
                .collect(),
            lines_through_origin: (0..self.lines.len())
                .filter(|&i| self.at_infinity(&self.lines[i]))
                .collect(),
        }
    }

    pub fn affine_chart(&self) -> Result<Chart<S>> {
        let mut points = Vec::with_capacity(self.points.len());
        for (j, p) in self.points.iter().enumerate() {
            if self.at_infinity(p) {
                return Err(Error::PointAtInfinity(self.geometry.points()[j].clone()));
            }
            let z = p[2].clone();
            points.push([p[0].clone() / z.clone(), p[1].clone() / z]);
        }
        let mut lines = Vec::with_capacity(self.lines.len());
        for (i, l) in self.lines.iter().enumerate() {
            if self.at_infinity(l) {
                return Err(Error::LineThroughOrigin(self.geometry.lines()[i].clone()));
            }
            let c = l[2].clone();
            lines.push([l[0].clone() / c.clone(), l[1].clone() / c]);
        }
        Ok(Chart { points, lines })
    }

    /// Applies seeded random integer transforms until the chart exists
    /// and no coincidences appear beyond those already present.
    pub fn auto_chart(&self, seed: u64) -> Result<(Self, ProjectiveTransform<S>)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let before = self.degeneracy_report();
        for attempt in 0..1000 {
            let range = 2 + attempt / 100;
            let t = random_integer_transform::<S>(&mut rng, range);
            let Ok(image) = self.apply_transform(&t) else {
                continue;
            };
            if image.affine_chart().is_err() {
                continue;
            }
            let after = image.degeneracy_report();
            if after.coincident_points == before.coincident_points
                && after.coincident_lines == before.coincident_lines
            {
                return Ok((image, t));
            }
        }
        Err(Error::Invalid("no chart-preserving transform found".into()))
    }

    /// Errors unless the four points are distinct with no three collinear.
    pub fn check_general_position(&self, pins: &[usize]) -> Result<()> {
        let mut uniq = pins.to_vec();
        uniq.sort_unstable();
        uniq.dedup();
        if pins.len() != 4 || uniq.len() != 4 {
            return Err(Error::PinCount(pins.len()));
        }
        for a in 0..4 {
            for b in a + 1..4 {
                for c in b + 1..4 {
                    let (pa, pb, pc) = (&self.points[pins[a]], &self.points[pins[b]], &self.points[pins[c]]);
                    let d = dot3(pa, &cross3(pb, pc));
                    let scale = norm3(pa) * norm3(pb) * norm3(pc);
                    if d.negligible(scale, self.tolerance) {
                        let n = |i: usize| self.geometry.points()[pins[i]].clone();
                        return Err(Error::CollinearPins(n(a), n(b), n(c)));
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    fn one_incidence(p: Vec3<Rational>, l: Vec3<Rational>) -> Realization<Rational> {
        let g = IncidenceGeometry::new(["p"], ["l"], &[("p", "l")]).unwrap();
        Realization::new(g, vec![p], vec![l]).unwrap()
    }

    #[test]
    fn normalization_is_scale_invariant() {
        let v = [q(2), q(4), q(6)];
        let w = [q(-1), q(-2), q(-3)];
        assert_eq!(normalize(&v, 0.0), normalize(&w, 0.0));
        let (n, lambda) = normalize_with_factor(&[q(3), q(0), q(0)], 0.0).unwrap();
        assert_eq!(n, [q(1), q(0), q(0)]);
        assert_eq!(lambda, q(3));
        assert!(normalize(&[q(0), q(0), q(0)], 0.0).is_none());
    }

    #[test]
    fn inverse_round_trip() {
        let m = Matrix::from_rows(3, &[vec![q(2), q(1), q(0)], vec![q(0), q(1), q(3)], vec![q(1), q(0), q(1)]]);
        let inv = inverse3(&m, 0.0).unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(3));
        let singular = Matrix::from_rows(3, &[vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)], vec![q(0), q(0), q(1)]]);
        assert!(ProjectiveTransform::new(singular).is_err());
    }

    #[test]
    fn chart_failures_name_the_element() {
        let r = one_incidence([q(1), q(0), q(0)], [q(0), q(1), q(0)]);
        assert_eq!(r.affine_chart().unwrap_err(), Error::PointAtInfinity("p".into()));
        let r = one_incidence([q(1), q(-1), q(1)], [q(1), q(1), q(0)]);
        assert_eq!(r.affine_chart().unwrap_err(), Error::LineThroughOrigin("l".into()));
        let rep = r.degeneracy_report();
        assert_eq!(rep.lines_through_origin, vec![0]);
    }

    #[test]
    fn transform_preserves_incidence() {
        let r = one_incidence([q(1), q(0), q(1)], [q(-1), q(0), q(1)]);
        assert!(r.verify().is_empty());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let t = random_integer_transform::<Rational>(&mut rng, 3);
        let image = r.apply_transform(&t).unwrap();
        assert!(image.verify().is_empty());
        let back = image.apply_transform(&t.inverse()).unwrap();
        assert_eq!(back, r.normalized());
    }

    #[test]
    fn float_verify_uses_relative_tolerance() {
        let g = IncidenceGeometry::new(["p"], ["l"], &[("p", "l")]).unwrap();
        let r = Realization::new(g, vec![[1.0, 0.0, 1.0]], vec![[-1.0 + 1e-12, 0.0, 1.0]]).unwrap();
        assert!(r.verify().is_empty());
        let off = r.map(|x| *x + 1e-3);
        assert_eq!(off.verify(), vec![0]);
    }
}
