//! Arithmetic backends, looked up by name (`exact` or `float`), each
//! running the analyze, orbit and trace pipelines on a configuration file.

use std::marker::PhantomData;

use serde_json::Value;

use crate::config::{ConfigFile, Configuration, Mode};
use crate::error::{Error, Result};
use crate::flex::{self, FlexOptions, FlexTrace};
use crate::realization::{ProjectiveTransform, Realization};
use crate::report;
use crate::rigidity::{self, DEFAULT_RANK_THRESHOLD};
use crate::scalar::{Rational, Scalar};
use crate::stress;
use crate::symmetry::{self, orbit_structure, Correlation, CorrelationGroup};

#[derive(Clone, Debug, PartialEq)]
pub struct Options {
    pub rank_threshold: f64,
    /// Incidence tolerance for float realizations.
    pub tolerance: Option<f64>,
    /// Move the realization by a seeded random transform when the chart fails.
    pub auto_chart: bool,
    pub seed: u64,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            rank_threshold: DEFAULT_RANK_THRESHOLD,
            tolerance: None,
            auto_chart: false,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceRequest {
    /// Empty means the file's pins.
    pub pins: Vec<String>,
    /// Index into the pinned kernel basis.
    pub motion: usize,
    pub steps: usize,
    pub dt: f64,
    /// Trace inside the symmetric motions of this group.
    pub group: Option<String>,
}

impl Default for TraceRequest {
    fn default() -> Self {
        let o = FlexOptions::default();
        TraceRequest {
            pins: Vec::new(),
            motion: 0,
            steps: o.steps,
            dt: o.step_size,
            group: None,
        }
    }
}

pub trait ArithmeticBackend: Send + Sync {
    fn name(&self) -> &'static str;
    fn analyze(&self, file: &ConfigFile, pins: &[String], opts: &Options) -> Result<Value>;
    fn orbit(&self, file: &ConfigFile, group: &str, opts: &Options) -> Result<Value>;
    fn trace(&self, file: &ConfigFile, req: &TraceRequest, opts: &Options) -> Result<FlexTrace>;
}

struct Backend<S>(PhantomData<fn() -> S>);

pub fn registry() -> Vec<Box<dyn ArithmeticBackend>> {
    vec![
        Box::new(Backend::<Rational>(PhantomData)),
        Box::new(Backend::<f64>(PhantomData)),
    ]
}

pub fn backend(name: &str) -> Result<Box<dyn ArithmeticBackend>> {
    registry()
        .into_iter()
        .find(|b| b.name() == name)
        .ok_or_else(|| Error::Invalid(format!("unknown mode `{name}`")))
}

pub fn backend_for(mode: Mode) -> Box<dyn ArithmeticBackend> {
    backend(mode.name()).expect("both modes are registered")
}

fn load<S: Scalar>(file: &ConfigFile, opts: &Options) -> Result<Configuration<S>> {
    let mut c = file.configuration::<S>()?;
    if let Some(t) = opts.tolerance {
        c.realization = c.realization.with_tolerance(t);
    }
    Ok(c)
}

/// Applies the chart remedy if requested and needed.
fn charted<S: Scalar>(
    r: Realization<S>,
    opts: &Options,
) -> Result<(Realization<S>, Option<ProjectiveTransform<S>>)> {
    match r.affine_chart() {
        Ok(_) => Ok((r, None)),
        Err(e) if !opts.auto_chart => Err(e),
        Err(_) => {
            let (moved, t) = r.auto_chart(opts.seed)?;
            Ok((moved, Some(t)))
        }
    }
}

fn group_by_name<S: Scalar>(c: &Configuration<S>, name: &str) -> Result<CorrelationGroup<S>> {
    if name == "trivial" && !c.groups.iter().any(|g| g.name == name) {
        return Ok(CorrelationGroup::trivial());
    }
    c.group(name)
}

fn group_to_f64<S: Scalar>(g: &CorrelationGroup<S>) -> Result<CorrelationGroup<f64>> {
    let gens = g
        .elements()
        .iter()
        .map(|c| Correlation::new(c.matrix.to_f64(), c.polarity))
        .collect::<Result<Vec<_>>>()?;
    CorrelationGroup::generate(&gens, symmetry::GROUP_CAP)
}

fn to_f64(v: &[impl Scalar]) -> Vec<f64> {
    v.iter().map(Scalar::to_f64).collect()
}

/// Scales a motion to unit max-norm, so a trace step is a chart displacement.
fn unit(m: Vec<f64>) -> Vec<f64> {
    let scale = m.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    if scale == 0.0 {
        return m;
    }
    m.into_iter().map(|x| x / scale).collect()
}

fn pick<T>(motions: &[T], index: usize) -> Result<&T> {
    if motions.is_empty() {
        return Err(Error::ZeroMotion);
    }
    motions.get(index).ok_or_else(|| {
        Error::Invalid(format!("motion index {index} out of range 0..{}", motions.len()))
    })
}

impl<S: Scalar> ArithmeticBackend for Backend<S> {
    fn name(&self) -> &'static str {
        if S::EXACT {
            "exact"
        } else {
            "float"
        }
    }

    fn analyze(&self, file: &ConfigFile, pins: &[String], opts: &Options) -> Result<Value> {
        let c = load::<S>(file, opts)?;
        let (r, transform) = charted(c.realization.clone(), opts)?;
        let rel = opts.rank_threshold;
        let (m, analysis) = rigidity::analyze(&r, rel)?;
        let cokernel = stress::cokernel_stresses(&m, rel);
        let stress_checks = cokernel
            .iter()
            .map(|w| stress::chart_stress_equivalence(&r, w, rel))
            .collect::<Result<Vec<_>>>()?;
        let pinned = if pins.is_empty() {
            None
        } else {
            let idx = c.pin_indices(pins)?;
            Some(flex::pinned_motions(&r, &idx, rel)?.len())
        };
        Ok(report::analyze(&report::AnalyzeInputs {
            realization: &r,
            analysis: &analysis,
            cokernel: &cokernel,
            stress_checks: &stress_checks,
            transform: transform.as_ref(),
            pinned: pinned.map(|d| (pins, d)),
            rank_threshold: rel,
        }))
    }

    fn orbit(&self, file: &ConfigFile, group: &str, opts: &Options) -> Result<Value> {
        let c = load::<S>(file, opts)?;
        let g = group_by_name(&c, group)?;
        let sa = symmetry::symmetric_analysis(&c.realization, &g, opts.rank_threshold)?;
        Ok(report::orbit(&c.realization, group, g.len(), &sa))
    }

    fn trace(&self, file: &ConfigFile, req: &TraceRequest, opts: &Options) -> Result<FlexTrace> {
        let c = load::<S>(file, opts)?;
        let pins = if req.pins.is_empty() { &c.pins } else { &req.pins };
        let pin_idx = c.pin_indices(pins)?;
        let flex_opts = FlexOptions {
            steps: req.steps,
            step_size: req.dt,
            rank_threshold: opts.rank_threshold,
            ..FlexOptions::default()
        };
        let rel = opts.rank_threshold;
        match &req.group {
            Some(name) => {
                let g = group_by_name(&c, name)?;
                let motions = flex::pinned_symmetric_motions(&c.realization, &g, &pin_idx, rel)?;
                let m = pick(&motions, req.motion)?;
                let (rf, gf) = (c.realization.to_f64(), group_to_f64(&g)?);
                // The floating point stabilizer bases need not match the exact ones.
                let m = flex::reexpress(
                    &orbit_structure(&c.realization, &g, rel)?,
                    m,
                    &orbit_structure(&rf, &gf, rel)?,
                )?;
                flex::symmetric_trace_flex(&rf, &gf, &unit(m), &pin_idx, &flex_opts)
            }
            None => {
                let (r, _) = charted(c.realization.clone(), opts)?;
                let motions: Vec<Vec<f64>> = flex::pinned_motions(&r, &pin_idx, rel)?
                    .iter()
                    .map(|v| to_f64(v))
                    .collect();
                let m = pick(&motions, req.motion)?;
                flex::trace_flex(&r.to_f64(), &pin_idx, &unit(m.clone()), &flex_opts)
            }
        }
    }
}
