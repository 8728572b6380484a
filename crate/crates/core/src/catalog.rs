//! Built-in configurations and the constructions that produce them.
//!
//! Entries are looked up by name through a [`Catalog`] of boxed
//! [`CatalogBuilder`]s. Exact entries carry rational coordinates; the
//! cyclic constructions need square roots and are built in `f64`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::IncidenceGeometry;
use crate::matrix::Matrix;
use crate::realization::{cross3, dot3, norm3, normalize, Realization, Vec3};
use crate::scalar::{Rational, Scalar};
use crate::symmetry::{Correlation, CorrelationGroup, GROUP_CAP};

/// Generators of a symmetry group, under a name used on the command line.
#[derive(Clone, Debug, PartialEq)]
pub struct NamedGroup<S> {
    pub name: String,
    pub generators: Vec<Correlation<S>>,
}

impl<S: Scalar> NamedGroup<S> {
    pub fn group(&self) -> Result<CorrelationGroup<S>> {
        CorrelationGroup::generate(&self.generators, GROUP_CAP)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Entry<S> {
    pub realization: Realization<S>,
    pub groups: Vec<NamedGroup<S>>,
    /// Suggested pins for tracing.
    pub pins: Vec<String>,
    /// A known self-stress, one coefficient per incidence.
    pub stress: Option<Vec<S>>,
}

impl<S: Scalar> Entry<S> {
    fn plain(realization: Realization<S>) -> Self {
        Entry {
            realization,
            groups: Vec::new(),
            pins: Vec::new(),
            stress: None,
        }
    }

    pub fn group(&self, name: &str) -> Result<CorrelationGroup<S>> {
        self.groups
            .iter()
            .find(|g| g.name == name)
            .ok_or_else(|| Error::Invalid(format!("no group `{name}`")))?
            .group()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum EntryData {
    Exact(Entry<Rational>),
    Float(Entry<f64>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct CatalogEntry {
    pub name: String,
    pub provenance: String,
    pub data: EntryData,
}

impl CatalogEntry {
    pub fn is_exact(&self) -> bool {
        matches!(self.data, EntryData::Exact(_))
    }

    pub fn exact(&self) -> Option<&Entry<Rational>> {
        match &self.data {
            EntryData::Exact(e) => Some(e),
            EntryData::Float(_) => None,
        }
    }

    pub fn float(&self) -> Option<&Entry<f64>> {
        match &self.data {
            EntryData::Float(e) => Some(e),
            EntryData::Exact(_) => None,
        }
    }

    pub fn geometry(&self) -> &IncidenceGeometry {
        match &self.data {
            EntryData::Exact(e) => e.realization.geometry(),
            EntryData::Float(e) => e.realization.geometry(),
        }
    }

    pub fn group_names(&self) -> Vec<String> {
        match &self.data {
            EntryData::Exact(e) => e.groups.iter().map(|g| g.name.clone()).collect(),
            EntryData::Float(e) => e.groups.iter().map(|g| g.name.clone()).collect(),
        }
    }
}

pub trait CatalogBuilder: Send + Sync {
    fn name(&self) -> &str;
    fn provenance(&self) -> &str;
    fn build(&self) -> Result<CatalogEntry>;
}

struct FnBuilder {
    name: &'static str,
    provenance: &'static str,
    build: fn() -> Result<EntryData>,
}

impl CatalogBuilder for FnBuilder {
    fn name(&self) -> &str {
        self.name
    }

    fn provenance(&self) -> &str {
        self.provenance
    }

    fn build(&self) -> Result<CatalogEntry> {
        Ok(CatalogEntry {
            name: self.name.to_string(),
            provenance: self.provenance.to_string(),
            data: (self.build)()?,
        })
    }
}

/// Registry of builders, selected by name.
pub struct Catalog {
    builders: Vec<Box<dyn CatalogBuilder>>,
}

impl Catalog {
    pub fn empty() -> Self {
        Catalog { builders: Vec::new() }
    }

    pub fn standard() -> Self {
        type Build = fn() -> Result<EntryData>;
        let mut c = Catalog::empty();
        let table: [(&str, &str, Build); 7] = [
            ("desargues", "10_3 Desargues configuration, two triangles perspective from a point", || {
                desargues().map(EntryData::Exact)
            }),
            ("quadrilateral", "complete quadrilateral, four lines in general position", || {
                complete_quadrilateral(true).map(EntryData::Exact)
            }),
            (
                "quadrilateral-stressed",
                "complete quadrilateral with all four lines on y = 1, carrying a self-stress",
                || complete_quadrilateral(false).map(EntryData::Exact),
            ),
            ("cyclic-10-3", "cyclic 10_3 configuration from a regular pentagon", || {
                cyclic_10_3().map(EntryData::Float)
            }),
            ("cyclic-20-4", "cyclic 20_4 configuration from a regular pentagon", || {
                cyclic_20_4().map(EntryData::Float)
            }),
            ("d4", "13 points and 12 lines with a group of two reflections", || {
                d4_configuration().map(EntryData::Exact)
            }),
            ("autopolar-hexagon", "six points and their polar lines under the unit circle", || {
                autopolar_hexagon().map(EntryData::Exact)
            }),
        ];
        for (name, provenance, build) in table {
            c.register(Box::new(FnBuilder {
                name,
                provenance,
                build,
            }));
        }
        c
    }

    /// Adds a builder, replacing any with the same name.
    pub fn register(&mut self, b: Box<dyn CatalogBuilder>) {
        self.builders.retain(|x| x.name() != b.name());
        self.builders.push(b);
    }

    pub fn names(&self) -> Vec<&str> {
        self.builders.iter().map(|b| b.name()).collect()
    }

    pub fn builders(&self) -> &[Box<dyn CatalogBuilder>] {
        &self.builders
    }

    pub fn get(&self, name: &str) -> Option<&dyn CatalogBuilder> {
        self.builders.iter().find(|b| b.name() == name).map(|b| b.as_ref())
    }

    pub fn build(&self, name: &str) -> Result<CatalogEntry> {
        self.get(name).ok_or_else(|| Error::UnknownEntry(name.to_string()))?.build()
    }
}

impl Default for Catalog {
    fn default() -> Self {
        Self::standard()
    }
}

/// Named points and lines built up by joins and meets.
#[derive(Clone, Debug, Default)]
pub struct Sketch<S> {
    points: Vec<(String, Vec3<S>)>,
    lines: Vec<(String, Vec3<S>)>,
    tolerance: f64,
}

impl<S: Scalar> Sketch<S> {
    pub fn new(tolerance: f64) -> Self {
        Sketch {
            points: Vec::new(),
            lines: Vec::new(),
            tolerance,
        }
    }

    fn norm(&self, v: Vec3<S>, name: &str) -> Result<Vec3<S>> {
        normalize(&v, self.tolerance).ok_or_else(|| Error::ZeroVector(name.to_string()))
    }

    pub fn point(&mut self, name: &str, v: Vec3<S>) -> Result<Vec3<S>> {
        let v = self.norm(v, name)?;
        self.points.push((name.to_string(), v.clone()));
        Ok(v)
    }

    pub fn line(&mut self, name: &str, v: Vec3<S>) -> Result<Vec3<S>> {
        let v = self.norm(v, name)?;
        self.lines.push((name.to_string(), v.clone()));
        Ok(v)
    }

    pub fn get_point(&self, name: &str) -> Result<Vec3<S>> {
        self.points
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.clone())
            .ok_or_else(|| Error::UnknownPoint(name.to_string()))
    }

    pub fn get_line(&self, name: &str) -> Result<Vec3<S>> {
        self.lines
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.clone())
            .ok_or_else(|| Error::UnknownLine(name.to_string()))
    }

    /// Adds the line through two named points.
    pub fn join(&mut self, name: &str, a: &str, b: &str) -> Result<Vec3<S>> {
        let v = cross3(&self.get_point(a)?, &self.get_point(b)?);
        self.line(name, v)
    }

    /// Adds the point where two named lines meet.
    pub fn meet(&mut self, name: &str, a: &str, b: &str) -> Result<Vec3<S>> {
        let v = cross3(&self.get_line(a)?, &self.get_line(b)?);
        self.point(name, v)
    }

    pub fn is_incident(&self, p: &Vec3<S>, l: &Vec3<S>) -> bool {
        dot3(l, p).negligible(norm3(l) * norm3(p), self.tolerance)
    }

    /// Every incident pair, point-major in insertion order.
    pub fn detect_incidences(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for (pn, p) in &self.points {
            for (ln, l) in &self.lines {
                if self.is_incident(p, l) {
                    out.push((pn.clone(), ln.clone()));
                }
            }
        }
        out
    }

    pub fn realize(&self, incidences: &[(String, String)]) -> Result<Realization<S>> {
        let g = IncidenceGeometry::new(
            self.points.iter().map(|(n, _)| n.clone()),
            self.lines.iter().map(|(n, _)| n.clone()),
            incidences,
        )?;
        let r = Realization::new(
            g,
            self.points.iter().map(|(_, v)| v.clone()).collect(),
            self.lines.iter().map(|(_, v)| v.clone()).collect(),
        )?;
        let r = if S::EXACT { r } else { r.with_tolerance(self.tolerance) };
        let bad = r.verify();
        if let Some(&k) = bad.first() {
            let (p, l) = r.geometry().incidence_label(k);
            return Err(Error::Invalid(format!("construction failed: {p} is not on {l}")));
        }
        Ok(r)
    }

    pub fn realize_detected(&self) -> Result<Realization<S>> {
        self.realize(&self.detect_incidences())
    }
}

fn q(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

fn qi(n: i64) -> Rational {
    Rational::from_i64(n)
}

fn pt(x: Rational, y: Rational) -> Vec3<Rational> {
    [x, y, qi(1)]
}

fn ipt(x: i64, y: i64) -> Vec3<Rational> {
    pt(qi(x), qi(y))
}

/// `p + λ (a - p)` for affine points.
fn along(p: &Vec3<Rational>, a: &Vec3<Rational>, lambda: Rational) -> Vec3<Rational> {
    pt(
        p[0].clone() + lambda.clone() * (a[0].clone() - p[0].clone()),
        p[1].clone() + lambda * (a[1].clone() - p[1].clone()),
    )
}

fn diag(a: i64, b: i64, c: i64) -> Matrix<Rational> {
    Matrix::from_rows(
        3,
        &[vec![qi(a), qi(0), qi(0)], vec![qi(0), qi(b), qi(0)], vec![qi(0), qi(0), qi(c)]],
    )
}

/// Triangles `abc` and `a'b'c'` perspective from `p`, with the three
/// meets of corresponding sides on the axis.
pub fn desargues() -> Result<Entry<Rational>> {
    let mut s = Sketch::new(0.0);
    // Centre (1,1); a, b, c chosen so that no side is parallel to its
    // partner and no element is at infinity or through the origin.
    let p = ipt(1, 1);
    let a = s.point("a", ipt(1, 11))?;
    let b = s.point("b", ipt(-3, 13))?;
    let c = s.point("c", ipt(6, 11))?;
    // a' = (1,5), b' = (-1,7), c' = (4,7).
    s.point("a'", along(&p, &a, q(2, 5)))?;
    s.point("b'", along(&p, &b, q(1, 2)))?;
    s.point("c'", along(&p, &c, q(3, 5)))?;
    s.point("p", p)?;
    s.join("pa", "p", "a")?;
    s.join("pb", "p", "b")?;
    s.join("pc", "p", "c")?;
    s.join("ab", "a", "b")?;
    s.join("a'b'", "a'", "b'")?;
    s.join("ac", "a", "c")?;
    s.join("a'c'", "a'", "c'")?;
    s.join("bc", "b", "c")?;
    s.join("b'c'", "b'", "c'")?;
    // (-11,17), (10,11), (24,7)
    s.meet("xab", "ab", "a'b'")?;
    s.meet("xac", "ac", "a'c'")?;
    s.meet("xbc", "bc", "b'c'")?;
    let axis = s.join("axis", "xab", "xac")?;
    if !s.is_incident(&s.get_point("xbc")?, &axis) {
        return Err(Error::Invalid("axis points are not collinear".into()));
    }
    let r = s.realize_detected()?;
    Ok(Entry::plain(r))
}

/// Four lines and their six crossings. `generic` picks lines in general
/// position; otherwise all lines coincide with `y = 1` and the entry
/// carries a self-stress.
pub fn complete_quadrilateral(generic: bool) -> Result<Entry<Rational>> {
    let incidences: Vec<(String, String)> = [
        ("p0", "l0"),
        ("p0", "l1"),
        ("p1", "l0"),
        ("p1", "l2"),
        ("p2", "l0"),
        ("p2", "l3"),
        ("p3", "l1"),
        ("p3", "l3"),
        ("p4", "l1"),
        ("p4", "l2"),
        ("p5", "l2"),
        ("p5", "l3"),
    ]
    .iter()
    .map(|&(p, l)| (p.to_string(), l.to_string()))
    .collect();
    let mut s = Sketch::new(0.0);
    if generic {
        s.line("l0", [qi(0), qi(-1), qi(1)])?;
        s.line("l1", [qi(-1), qi(0), qi(1)])?;
        s.line("l2", [qi(1), qi(1), qi(1)])?;
        s.line("l3", [qi(2), qi(-1), qi(1)])?;
        for (name, _) in incidences.iter().step_by(2) {
            let lines: Vec<&String> = incidences.iter().filter(|(p, _)| p == name).map(|(_, l)| l).collect();
            s.meet(name, lines[0], lines[1])?;
        }
        let r = s.realize(&incidences)?;
        return Ok(Entry::plain(r));
    }
    for (k, x) in [-2, 8, 3, 0, -1, 2].into_iter().enumerate() {
        s.point(&format!("p{k}"), ipt(x, 1))?;
    }
    for k in 0..4 {
        s.line(&format!("l{k}"), [qi(0), qi(-1), qi(1)])?;
    }
    let r = s.realize(&incidences)?;
    let stress = [1, -1, 1, -1, -2, 2, -1, 1, 2, -2, 3, -3].map(qi).to_vec();
    Ok(Entry {
        stress: Some(stress),
        ..Entry::plain(r)
    })
}

/// Which intersection of a circle and a line the cyclic constructions use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CircleRoot {
    /// The intersection farther from the origin.
    #[default]
    Far,
    Near,
}

const FLOAT_TOLERANCE: f64 = 1e-9;

fn rotation(k: usize) -> Matrix<f64> {
    let a = 2.0 * PI * k as f64 / 5.0;
    let (s, c) = a.sin_cos();
    Matrix::from_rows(3, &[vec![c, -s, 0.0], vec![s, c, 0.0], vec![0.0, 0.0, 1.0]])
}

fn rotate(k: usize, p: &Vec3<f64>) -> Vec3<f64> {
    let v = rotation(k).mul_vec(p);
    [v[0], v[1], v[2]]
}

fn circumcircle(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> ([f64; 2], f64) {
    let d = 2.0 * (a[0] * (b[1] - c[1]) + b[0] * (c[1] - a[1]) + c[0] * (a[1] - b[1]));
    let n = |p: [f64; 2]| p[0] * p[0] + p[1] * p[1];
    let ux = (n(a) * (b[1] - c[1]) + n(b) * (c[1] - a[1]) + n(c) * (a[1] - b[1])) / d;
    let uy = (n(a) * (c[0] - b[0]) + n(b) * (a[0] - c[0]) + n(c) * (b[0] - a[0])) / d;
    let r = ((a[0] - ux).powi(2) + (a[1] - uy).powi(2)).sqrt();
    ([ux, uy], r)
}

/// Intersection of the circle with the line `l·(x, y, 1) = 0`.
fn circle_line(center: [f64; 2], radius: f64, l: &Vec3<f64>, root: CircleRoot) -> Result<Vec3<f64>> {
    let nn = l[0] * l[0] + l[1] * l[1];
    let base = [-l[2] * l[0] / nn, -l[2] * l[1] / nn];
    let dir = [-l[1], l[0]];
    let off = [base[0] - center[0], base[1] - center[1]];
    let a = nn;
    let b = 2.0 * (off[0] * dir[0] + off[1] * dir[1]);
    let c = off[0] * off[0] + off[1] * off[1] - radius * radius;
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return Err(Error::Invalid("circle misses line".into()));
    }
    let at = |t: f64| [base[0] + t * dir[0], base[1] + t * dir[1], 1.0];
    let (p, q) = (at((-b + disc.sqrt()) / (2.0 * a)), at((-b - disc.sqrt()) / (2.0 * a)));
    let r2 = |v: &Vec3<f64>| v[0] * v[0] + v[1] * v[1];
    let far = r2(&p) >= r2(&q);
    Ok(match (root, far) {
        (CircleRoot::Far, true) | (CircleRoot::Near, false) => p,
        _ => q,
    })
}

fn xy(v: &Vec3<f64>) -> [f64; 2] {
    [v[0] / v[2], v[1] / v[2]]
}

/// Pentagon vertices `v_i`, lines `l_i = v_i v_{i+2}`, and the rotated
/// copies of the second circle point on `l_0`. The circle passes through
/// `v_1`, the origin and `v_other`.
fn pentagon_family(s: &mut Sketch<f64>, root: CircleRoot, prefix: &str, other: usize) -> Result<()> {
    let v: Vec<Vec3<f64>> = (0..5)
        .map(|i| {
            let a = 2.0 * PI * i as f64 / 5.0;
            [a.cos(), a.sin(), 1.0]
        })
        .collect();
    let l0 = cross3(&v[0], &v[2]);
    let (center, radius) = circumcircle(xy(&v[1]), [0.0, 0.0], xy(&v[other]));
    let w0 = circle_line(center, radius, &l0, root)?;
    for i in 0..5 {
        s.point(&format!("{prefix}{i}"), rotate(i, &w0))?;
    }
    Ok(())
}

fn pentagon(s: &mut Sketch<f64>) -> Result<()> {
    for i in 0..5 {
        let a = 2.0 * PI * i as f64 / 5.0;
        s.point(&format!("v{i}"), [a.cos(), a.sin(), 1.0])?;
    }
    Ok(())
}

fn rotation_group() -> Result<NamedGroup<f64>> {
    Ok(NamedGroup {
        name: "rotation".into(),
        generators: vec![Correlation::collineation(rotation(1))?],
    })
}

fn cyclic_sketch(root: CircleRoot, full: bool) -> Result<Sketch<f64>> {
    let mut s = Sketch::new(FLOAT_TOLERANCE);
    pentagon(&mut s)?;
    pentagon_family(&mut s, root, "w", 4)?;
    if full {
        pentagon_family(&mut s, root, "w'", 3)?;
    }
    for i in 0..5 {
        s.join(&format!("l{i}"), &format!("v{i}"), &format!("v{}", (i + 2) % 5))?;
    }
    for i in 0..5 {
        s.join(&format!("m{i}"), &format!("w{i}"), &format!("w{}", (i + 2) % 5))?;
    }
    if full {
        for i in 0..5 {
            s.join(&format!("n{i}"), &format!("w'{i}"), &format!("w'{}", (i + 2) % 5))?;
        }
        for i in 0..5 {
            s.meet(&format!("u{i}"), &format!("m{i}"), &format!("n{i}"))?;
        }
        for i in 0..5 {
            s.join(&format!("o{i}"), &format!("u{i}"), &format!("u{}", (i + 2) % 5))?;
        }
    }
    Ok(s)
}

pub fn cyclic_10_3_with(root: CircleRoot) -> Result<Entry<f64>> {
    let r = cyclic_sketch(root, false)?.realize_detected()?;
    Ok(Entry {
        groups: vec![rotation_group()?],
        pins: vec!["v0".into(), "v1".into(), "v2".into(), "v3".into()],
        ..Entry::plain(r)
    })
}

pub fn cyclic_10_3() -> Result<Entry<f64>> {
    cyclic_10_3_with(CircleRoot::default())
}

pub fn cyclic_20_4_with(root: CircleRoot) -> Result<Entry<f64>> {
    let r = cyclic_sketch(root, true)?.realize_detected()?;
    Ok(Entry {
        groups: vec![rotation_group()?],
        pins: vec!["v0".into(), "v1".into(), "v2".into(), "v3".into()],
        ..Entry::plain(r)
    })
}

pub fn cyclic_20_4() -> Result<Entry<f64>> {
    cyclic_20_4_with(CircleRoot::default())
}

/// `(1/3) [[-1,2,2],[2,-1,2],[2,2,-1]]`: orthogonal, symmetric, moves the
/// centre of symmetry off the origin so the chart exists.
fn d4_frame() -> Matrix<Rational> {
    let rows = [[-1, 2, 2], [2, -1, 2], [2, 2, -1]];
    Matrix::from_rows(3, &rows.map(|r| r.iter().map(|&x| q(x, 3)).collect::<Vec<_>>()))
}

fn conjugate(m: &Matrix<Rational>) -> Matrix<Rational> {
    let r = d4_frame();
    r.mul(m).mul(&r)
}

/// Symmetric about two perpendicular lines. Built in a frame where the
/// mirrors are the axes, then moved by `d4_frame`.
pub fn d4_configuration() -> Result<Entry<Rational>> {
    let mut e = Sketch::new(0.0);
    // p0 and its mirror images; q0, q1 on the dashed mirror y = 0.
    e.point("p0", ipt(-2, 3))?;
    e.point("p1", ipt(2, 3))?;
    e.point("p2", ipt(2, -3))?;
    e.point("p3", ipt(-2, -3))?;
    e.point("q0", ipt(-4, 0))?;
    e.point("q1", ipt(4, 0))?;
    for (name, a, b) in [
        ("q0p0", "q0", "p0"),
        ("q1p1", "q1", "p1"),
        ("q0p3", "q0", "p3"),
        ("q1p2", "q1", "p2"),
        ("p0p1", "p0", "p1"),
        ("p2p3", "p2", "p3"),
    ] {
        e.join(name, a, b)?;
    }
    // (-6,3), (6,3), (-6,-3), (6,-3), (0,6), (0,-6)
    let helpers = [
        ("v0", "q0p3", "p0p1"),
        ("v1", "q1p2", "p0p1"),
        ("v2", "q0p0", "p2p3"),
        ("v3", "q1p1", "p2p3"),
        ("u0", "q0p0", "q1p1"),
        ("u1", "q0p3", "q1p2"),
    ];
    for (name, a, b) in helpers {
        e.meet(name, a, b)?;
    }
    e.point("c", ipt(0, 0))?;

    let r = d4_frame();
    let moved = |v: Vec3<Rational>| -> Vec3<Rational> {
        let w = r.mul_vec(&v);
        [w[0].clone(), w[1].clone(), w[2].clone()]
    };
    let mut s = Sketch::new(0.0);
    for name in ["p0", "p1", "p2", "p3", "q0", "q1", "v0", "v1", "v2", "v3", "u0", "u1", "c"] {
        s.point(name, moved(e.get_point(name)?))?;
    }
    for (a, b) in [
        ("v2", "u0"),
        ("v2", "v1"),
        ("u1", "v0"),
        ("u1", "v1"),
        ("v3", "u0"),
        ("v3", "v0"),
        ("q0", "q1"),
        ("v3", "v2"),
        ("v1", "v0"),
        ("p3", "p1"),
        ("p2", "p0"),
        ("u0", "u1"),
    ] {
        s.join(&format!("{a}{b}"), a, b)?;
    }
    let real = s.realize_detected()?;
    let dashed = Correlation::collineation(conjugate(&diag(1, -1, 1)))?;
    let dotted = Correlation::collineation(conjugate(&diag(-1, 1, 1)))?;
    let half = Correlation::collineation(conjugate(&diag(-1, -1, 1)))?;
    let group = |name: &str, generators: Vec<Correlation<Rational>>| NamedGroup {
        name: name.into(),
        generators,
    };
    Ok(Entry {
        groups: vec![
            group("dashed", vec![dashed.clone()]),
            group("dotted", vec![dotted.clone()]),
            group("half-turn", vec![half]),
            group("d4", vec![dashed, dotted]),
        ],
        pins: vec!["p0".into(), "p1".into(), "p2".into(), "p3".into()],
        ..Entry::plain(real)
    })
}

/// Six points on `y = ±1` and their polars `(-x, -y, 1)` with respect to
/// the unit circle.
pub fn autopolar_hexagon() -> Result<Entry<Rational>> {
    let mut s = Sketch::new(0.0);
    let coords = [(0, -1), (1, -1), (2, -1), (0, 1), (1, 1), (2, 1)];
    for (k, &(x, y)) in coords.iter().enumerate() {
        s.point(&format!("p{}", k + 1), ipt(x, y))?;
    }
    for (k, &(x, y)) in coords.iter().enumerate() {
        s.line(&format!("L{}", k + 1), [qi(-x), qi(-y), qi(1)])?;
    }
    let incidences: Vec<(String, String)> = [
        (1, 1),
        (1, 2),
        (1, 3),
        (4, 4),
        (4, 5),
        (4, 6),
        (2, 6),
        (3, 5),
        (2, 1),
        (3, 1),
        (5, 3),
        (5, 4),
        (6, 2),
        (6, 4),
    ]
    .iter()
    .map(|&(p, l)| (format!("p{p}"), format!("L{l}")))
    .collect();
    let r = s.realize(&incidences)?;
    Ok(Entry {
        groups: vec![NamedGroup {
            name: "polarity".into(),
            generators: vec![Correlation::polarity(diag(1, 1, -1))?],
        }],
        pins: vec!["p1".into(), "p2".into(), "p4".into(), "p6".into()],
        ..Entry::plain(r)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_names() {
        let c = Catalog::standard();
        assert!(c.names().len() >= 6);
        assert_eq!(c.build("nope").unwrap_err(), Error::UnknownEntry("nope".into()));
    }

    #[test]
    fn desargues_coordinates() {
        let e = desargues().unwrap();
        let r = &e.realization;
        assert_eq!(r.geometry().num_incidences(), 30);
        let g = r.geometry();
        assert_eq!(r.point(g.point_index("xbc").unwrap()), &ipt(24, 7));
        assert_eq!(r.line(g.line_index("axis").unwrap()), &[q(-2, 97), q(-7, 97), qi(1)]);
    }

    #[test]
    fn generic_quadrilateral_meets() {
        let e = complete_quadrilateral(true).unwrap();
        let r = &e.realization;
        assert_eq!(r.point(5), &pt(q(-2, 3), q(-1, 3)));
        assert!(r.degeneracy_report().is_clean());
    }

    #[test]
    fn circle_roots_differ() {
        let l = [0.0, 1.0, 0.0];
        let far = circle_line([1.0, 0.0], 2.0, &l, CircleRoot::Far).unwrap();
        let near = circle_line([1.0, 0.0], 2.0, &l, CircleRoot::Near).unwrap();
        assert!((far[0] - 3.0).abs() < 1e-12);
        assert!((near[0] + 1.0).abs() < 1e-12);
    }

    #[test]
    fn d4_point_in_moved_frame() {
        let e = d4_configuration().unwrap();
        assert_eq!(e.realization.point(0), &ipt(10, -5));
        assert_eq!(e.realization.geometry().num_incidences(), 42);
    }
}
