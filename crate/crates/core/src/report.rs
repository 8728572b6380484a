//! JSON reports.

use serde_json::{json, Map, Value};

use crate::flex::FlexTrace;
use crate::geometry::IncidenceGeometry;
use crate::matrix::Matrix;
use crate::realization::{DegeneracyReport, ProjectiveTransform, Realization};
use crate::rigidity::{RigidityAnalysis, Verdict};
use crate::scalar::Scalar;
use crate::stress::StressEquivalence;
use crate::symmetry::SymmetricAnalysis;

pub fn vector<S: Scalar>(v: &[S]) -> Value {
    Value::Array(v.iter().map(Scalar::to_json).collect())
}

pub fn matrix<S: Scalar>(m: &Matrix<S>) -> Value {
    Value::Array((0..m.rows()).map(|i| vector(m.row(i))).collect())
}

pub fn signature(g: &IncidenceGeometry) -> Value {
    let s = g.signature();
    json!({
        "label": s.to_string(),
        "points": s.p,
        "lines": s.l,
        "incidences": g.num_incidences(),
        "point_degree": s.r,
        "line_degree": s.k,
        "balanced": s.balanced,
    })
}

pub fn sparsity(g: &IncidenceGeometry) -> Value {
    let c = g.sparsity_counts();
    let subsets = c.subsets.map(|s| {
        let first = s.first_violation.map(|v| {
            v.iter()
                .map(|&k| {
                    let (p, l) = g.incidence_label(k);
                    format!("({p},{l})")
                })
                .collect::<Vec<_>>()
        });
        json!({"checked": s.checked, "violations": s.violations, "first_violation": first})
    });
    json!({"excess": c.excess, "minimally_counted": c.minimally_counted, "subsets": subsets})
}

pub fn degeneracy(g: &IncidenceGeometry, d: &DegeneracyReport) -> Value {
    let pair = |names: &[String], v: &[(usize, usize)]| -> Value {
        v.iter().map(|&(a, b)| json!([names[a], names[b]])).collect()
    };
    let single = |names: &[String], v: &[usize]| -> Value { v.iter().map(|&a| json!(names[a])).collect() };
    json!({
        "clean": d.is_clean(),
        "coincident_points": pair(g.points(), &d.coincident_points),
        "coincident_lines": pair(g.lines(), &d.coincident_lines),
        "points_at_infinity": single(g.points(), &d.points_at_infinity),
        "lines_through_origin": single(g.lines(), &d.lines_through_origin),
    })
}

fn verdict(v: Verdict) -> (&'static str, usize) {
    match v {
        Verdict::InfinitesimallyRigid => ("infinitesimally_rigid", 0),
        Verdict::Flexible { nontrivial_dim } => ("flexible", nontrivial_dim),
    }
}

fn f64_json(x: f64) -> Value {
    x.to_json()
}

pub struct AnalyzeInputs<'a, S> {
    pub realization: &'a Realization<S>,
    pub analysis: &'a RigidityAnalysis<S>,
    pub cokernel: &'a [Vec<S>],
    pub stress_checks: &'a [StressEquivalence],
    pub transform: Option<&'a ProjectiveTransform<S>>,
    pub pinned: Option<(&'a [String], usize)>,
    pub rank_threshold: f64,
}

pub fn analyze<S: Scalar>(inp: &AnalyzeInputs<'_, S>) -> Value {
    let r = inp.realization;
    let g = r.geometry();
    let a = inp.analysis;
    let (v, _) = verdict(a.verdict);
    let mut out = Map::new();
    out.insert("mode".into(), json!(if S::EXACT { "exact" } else { "float" }));
    out.insert("signature".into(), signature(g));
    out.insert("sparsity".into(), sparsity(g));
    out.insert("degeneracy".into(), degeneracy(g, &r.degeneracy_report()));
    out.insert(
        "chart_transform".into(),
        inp.transform.map_or(Value::Null, |t| matrix(t.matrix())),
    );
    out.insert("matrix".into(), json!({"rows": a.rows, "cols": a.cols}));
    out.insert("rank".into(), json!(a.rank));
    out.insert("nullity".into(), json!(a.nullity));
    out.insert("trivial_span".into(), json!(a.trivial_span));
    out.insert("nontrivial_dim".into(), json!(a.nontrivial_dim));
    out.insert("verdict".into(), json!(v));
    out.insert("statically_rigid".into(), json!(a.statically_rigid));
    out.insert("cokernel_dim".into(), json!(inp.cokernel.len()));
    out.insert(
        "cokernel".into(),
        Value::Array(inp.cokernel.iter().map(|w| vector(w)).collect()),
    );
    out.insert(
        "stress_checks".into(),
        inp.stress_checks
            .iter()
            .map(|c| {
                json!({
                    "row_dependence": c.row_dependence,
                    "equilibrium": c.equilibrium,
                    "combinatorial": c.combinatorial,
                    "agrees": c.agrees(),
                })
            })
            .collect(),
    );
    if let Some((pins, dim)) = inp.pinned {
        out.insert("pinned".into(), json!({"pins": pins, "kernel_dim": dim}));
    }
    if !S::EXACT {
        out.insert(
            "singular_values".into(),
            a.singular_values.as_deref().map_or(Value::Null, |s| s.iter().map(|&x| f64_json(x)).collect()),
        );
        out.insert("gap".into(), a.gap.map_or(Value::Null, f64_json));
        out.insert("rank_threshold".into(), json!(inp.rank_threshold));
        out.insert(
            "caveat".into(),
            json!("float rank decided by a relative singular value threshold; check the gap"),
        );
    }
    Value::Object(out)
}

pub fn orbit<S: Scalar>(r: &Realization<S>, group_name: &str, order: usize, sa: &SymmetricAnalysis<S>) -> Value {
    let g = r.geometry();
    let st = &sa.orbit_matrix.structure;
    let name = |e: usize| {
        if e < g.num_points() {
            g.points()[e].clone()
        } else {
            g.lines()[e - g.num_points()].clone()
        }
    };
    let element_orbits: Vec<Vec<String>> = st
        .element_orbits
        .iter()
        .map(|o| o.iter().map(|&e| name(e)).collect())
        .collect();
    let incidence_orbits: Vec<Vec<String>> = st
        .incidence_orbits
        .iter()
        .map(|o| {
            o.iter()
                .map(|&k| {
                    let (p, l) = g.incidence_label(k);
                    format!("({p},{l})")
                })
                .collect()
        })
        .collect();
    json!({
        "group": group_name,
        "order": order,
        "element_orbits": element_orbits,
        "incidence_orbits": incidence_orbits,
        "orbit_matrix": {
            "rows": sa.orbit_matrix.row_labels(r),
            "columns": sa.orbit_matrix.column_labels(r),
            "entries": matrix(&sa.orbit_matrix.matrix),
        },
        "kernel_dim": sa.kernel.len(),
        "kernel": sa.kernel.iter().map(|k| vector(k)).collect::<Vec<_>>(),
        "symmetric_trivial_dim": sa.symmetric_trivial_dim,
        "nontrivial_symmetric_dim": sa.nontrivial_symmetric_dim,
        "max_lift_residual": f64_json(sa.max_lift_residual),
        "round_trip": sa.round_trip,
    })
}

fn chart_map(names: &[String], v: &[[f64; 3]]) -> Value {
    let mut m = Map::new();
    for (n, x) in names.iter().zip(v) {
        m.insert(n.clone(), json!([f64_json(x[0] / x[2]), f64_json(x[1] / x[2])]));
    }
    Value::Object(m)
}

/// One object per sample with chart coordinates of every element.
pub fn trace(t: &FlexTrace) -> Value {
    t.samples
        .iter()
        .map(|s| {
            let g = s.realization.geometry();
            json!({
                "t": f64_json(s.t),
                "residual": f64_json(s.residual),
                "points": chart_map(g.points(), s.realization.points()),
                "lines": chart_map(g.lines(), s.realization.lines()),
            })
        })
        .collect()
}
