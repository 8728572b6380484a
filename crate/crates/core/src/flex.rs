//! Predictor-corrector tracing of finite flexes.
//!
//! Continuation always runs in `f64`. A path is parametrized by the
//! coordinate `k` where the initial motion is largest: `t = (s_k - s0_k) / m_k`.
//! Each step predicts along the previous direction projected onto the
//! kernel of the current Jacobian, corrects with minimum norm Gauss-Newton,
//! and adjusts the predictor length by secant iteration so that `t` lands
//! near the grid `step * step_size`. A last correction with `s_k` held
//! puts it exactly on the grid. Steps that fail are retried at half the
//! stride, down to `step_size / 1024`.

use crate::error::{Error, Result};
use crate::geometry::IncidenceGeometry;
use crate::linalg::float::{lstsq, rank_kernel};
use crate::matrix::Matrix;
use crate::realization::{Chart, Realization};
use crate::rigidity::{self, matrix_from_chart};
use crate::scalar::Scalar;
use crate::symmetry::{chart_jacobian, orbit_structure, CorrelationGroup, OrbitStructure};

#[derive(Clone, Debug, PartialEq)]
pub struct FlexOptions {
    pub steps: usize,
    pub step_size: f64,
    pub max_iterations: usize,
    /// Largest accepted `|a x + b y + 1|` over incidences.
    pub tolerance: f64,
    pub rank_threshold: f64,
}

impl Default for FlexOptions {
    fn default() -> Self {
        FlexOptions {
            steps: 50,
            step_size: 1e-2,
            max_iterations: 25,
            tolerance: 1e-9,
            rank_threshold: rigidity::DEFAULT_RANK_THRESHOLD,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub realization: Realization<f64>,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlexTrace {
    pub samples: Vec<Sample>,
    pub pins: Vec<String>,
    /// Initial motion in the traced coordinates.
    pub motion: Vec<f64>,
    /// Traced coordinate that serves as the path parameter.
    pub parameter_coordinate: usize,
}

/// Coordinates in which a path is traced.
trait Parametrization {
    fn chart(&self, s: &[f64]) -> Chart<f64>;
    /// Incidences x coordinates.
    fn jacobian(&self, s: &[f64]) -> Matrix<f64>;
}

fn residuals(incidences: &[(usize, usize)], chart: &Chart<f64>) -> Vec<f64> {
    incidences
        .iter()
        .map(|&(p, l)| {
            let (x, y) = (chart.points[p][0], chart.points[p][1]);
            let (a, b) = (chart.lines[l][0], chart.lines[l][1]);
            a * x + b * y + 1.0
        })
        .collect()
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn chart_is_sane(chart: &Chart<f64>) -> bool {
    chart
        .points
        .iter()
        .chain(&chart.lines)
        .flatten()
        .all(|x| x.is_finite() && x.abs() < 1e8)
}

/// Full chart vector in `[lines | points]` column layout.
fn chart_to_columns(chart: &Chart<f64>) -> Vec<f64> {
    chart.lines.iter().chain(&chart.points).flat_map(|v| [v[0], v[1]]).collect()
}

fn columns_to_chart(z: &[f64], num_lines: usize) -> Chart<f64> {
    let pairs: Vec<[f64; 2]> = z.chunks(2).map(|c| [c[0], c[1]]).collect();
    Chart {
        lines: pairs[..num_lines].to_vec(),
        points: pairs[num_lines..].to_vec(),
    }
}

struct Pinned<'a> {
    incidences: &'a [(usize, usize)],
    base: Vec<f64>,
    free: Vec<usize>,
    num_lines: usize,
}

impl Parametrization for Pinned<'_> {
    fn chart(&self, s: &[f64]) -> Chart<f64> {
        let mut z = self.base.clone();
        for (k, &c) in self.free.iter().enumerate() {
            z[c] = s[k];
        }
        columns_to_chart(&z, self.num_lines)
    }

    fn jacobian(&self, s: &[f64]) -> Matrix<f64> {
        matrix_from_chart(self.incidences, &self.chart(s)).matrix.select_columns(&self.free)
    }
}

struct Symmetric<'a> {
    incidences: &'a [(usize, usize)],
    structure: OrbitStructure<f64>,
    /// Chart coordinates of each orbit representative at the start.
    rep0: Vec<[f64; 2]>,
    /// Reduced columns that are traced; the rest stay at zero.
    free: Vec<usize>,
}

impl Symmetric<'_> {
    fn reduced(&self, s: &[f64]) -> Vec<f64> {
        let mut full = vec![0.0; self.structure.num_columns()];
        for (k, &c) in self.free.iter().enumerate() {
            full[c] = s[k];
        }
        full
    }

    fn rep_coords(&self, s: &[f64]) -> Vec<[f64; 2]> {
        let full = self.reduced(s);
        self.structure
            .bases
            .iter()
            .enumerate()
            .map(|(o, basis)| {
                let block = &full[self.structure.offsets[o]..self.structure.offsets[o] + basis.cols()];
                let d = basis.mul_vec(block);
                [self.rep0[o][0] + d[0], self.rep0[o][1] + d[1]]
            })
            .collect()
    }
}

impl Parametrization for Symmetric<'_> {
    fn chart(&self, s: &[f64]) -> Chart<f64> {
        let st = &self.structure;
        let reps = self.rep_coords(s);
        let n = st.num_points + st.num_lines;
        let coords: Vec<[f64; 2]> = (0..n)
            .map(|e| {
                let uv = reps[st.orbit_of[e]];
                let a = &st.group_matrices[st.carrier[e]];
                let w = a.mul_vec(&[uv[0], uv[1], 1.0]);
                [w[0] / w[2], w[1] / w[2]]
            })
            .collect();
        Chart {
            points: coords[..st.num_points].to_vec(),
            lines: coords[st.num_points..].to_vec(),
        }
    }

    fn jacobian(&self, s: &[f64]) -> Matrix<f64> {
        let st = &self.structure;
        let chart = self.chart(s);
        let full = matrix_from_chart(self.incidences, &chart);
        let reps = self.rep_coords(s);
        let mut lift = Matrix::zeros(st.full_columns(), self.free.len());
        for (k, &c) in self.free.iter().enumerate() {
            let o = st.offsets.iter().rposition(|&off| off <= c).expect("column in some block");
            let col = st.bases[o].column(c - st.offsets[o]);
            for &e in &st.element_orbits[o] {
                let j = chart_jacobian(&st.group_matrices[st.carrier[e]], &reps[o]);
                let fc = st.full_column(e);
                lift[(fc, k)] = j[0][0] * col[0] + j[0][1] * col[1];
                lift[(fc + 1, k)] = j[1][0] * col[0] + j[1][1] * col[1];
            }
        }
        full.matrix.mul(&lift)
    }
}

/// Parameter values with their reduced coordinates.
type Path = Vec<(f64, Vec<f64>)>;

struct Engine<'a, P: Parametrization> {
    param: &'a P,
    incidences: &'a [(usize, usize)],
    opts: &'a FlexOptions,
}

impl<P: Parametrization> Engine<'_, P> {
    fn residual(&self, s: &[f64]) -> f64 {
        max_abs(&residuals(self.incidences, &self.param.chart(s)))
    }

    /// Minimum norm Gauss-Newton onto the incidence equations. With `held`,
    /// that coordinate keeps its value.
    fn correct(&self, mut s: Vec<f64>, held: Option<usize>, t: f64) -> Result<Vec<f64>> {
        let others: Vec<usize> = (0..s.len()).filter(|&c| Some(c) != held).collect();
        let mut last = f64::INFINITY;
        for _ in 0..self.opts.max_iterations {
            let chart = self.param.chart(&s);
            if !chart_is_sane(&chart) {
                return Err(Error::ChartDegenerate(t));
            }
            let f = residuals(self.incidences, &chart);
            let r = max_abs(&f);
            // Past tolerance, stop once rounding noise dominates.
            if r <= self.opts.tolerance && (r <= 1e-3 * self.opts.tolerance || r > 0.5 * last) {
                return Ok(s);
            }
            last = r;
            let j = self.param.jacobian(&s).select_columns(&others);
            let delta = lstsq(&j, &f, 1e-12);
            for (&c, d) in others.iter().zip(&delta) {
                s[c] -= d;
            }
        }
        if self.residual(&s) <= self.opts.tolerance {
            Ok(s)
        } else {
            Err(Error::StalledCorrector(t))
        }
    }

    /// One predictor step along the kernel direction closest to `dir`,
    /// corrected with the parameter coordinate held at `target`.
    fn advance(
        &self,
        s: &[f64],
        dir: &[f64],
        (k, origin, mk): (usize, f64, f64),
        t_now: f64,
        target: f64,
    ) -> Result<Vec<f64>> {
        let kernel = rank_kernel(&self.param.jacobian(s), self.opts.rank_threshold).kernel;
        let mut tangent = vec![0.0; s.len()];
        for v in &kernel {
            let c: f64 = v.iter().zip(dir).map(|(a, b)| a * b).sum();
            for (t, x) in tangent.iter_mut().zip(v) {
                *t += c * x;
            }
        }
        if max_abs(&tangent) <= 1e-12 || tangent[k].abs() <= 1e-12 {
            return Err(Error::StalledCorrector(t_now));
        }
        // The free corrector respects any symmetry of the equations, so the
        // step is landed with it first; holding the parameter coordinate
        // afterwards only removes the small remaining offset in `t`.
        let param_of = |s: &[f64]| (s[k] - origin) / mk;
        let rate = tangent[k] / mk;
        let land = |alpha: f64| -> Result<(Vec<f64>, f64)> {
            let guess: Vec<f64> = s.iter().zip(&tangent).map(|(x, d)| x + alpha * d).collect();
            let c = self.correct(guess, None, target)?;
            let g = param_of(&c) - target;
            Ok((c, g))
        };
        let tol = 1e-12 * target.abs().max(1.0);
        let mut a0 = (target - t_now) / rate;
        let (mut best, mut g0) = land(a0)?;
        if g0.abs() > tol {
            let mut a1 = a0 - g0 / rate;
            let (s1, mut g1) = land(a1)?;
            if g1.abs() < g0.abs() {
                best = s1;
            }
            for _ in 0..8 {
                if g1.abs() <= tol || g1 == g0 {
                    break;
                }
                let a2 = a1 - g1 * (a1 - a0) / (g1 - g0);
                let (s2, g2) = land(a2)?;
                if g2.abs() < g1.abs() {
                    best = s2;
                }
                (a0, g0) = (a1, g1);
                (a1, g1) = (a2, g2);
            }
        }
        best[k] = origin + target * mk;
        self.correct(best, Some(k), target)
    }

    fn run(&self, s0: Vec<f64>, m: &[f64]) -> Result<(usize, Path)> {
        let scale = max_abs(m);
        if scale <= 1e-12 {
            return Err(Error::ZeroMotion);
        }
        let j0 = self.param.jacobian(&s0);
        let drift = max_abs(&j0.mul_vec(m));
        if drift > 1e-6 * scale * j0.max_abs().max(1.0) {
            return Err(Error::Invalid("motion is not in the kernel".into()));
        }
        let mut k = 0;
        for (i, v) in m.iter().enumerate() {
            if v.abs() > m[k].abs() {
                k = i;
            }
        }
        let (origin, mk) = (s0[k], m[k]);
        let mut t_now = 0.0;
        let norm = m.iter().map(|x| x * x).sum::<f64>().sqrt();
        let mut dir: Vec<f64> = m.iter().map(|x| x / norm).collect();
        let mut s = s0;
        let mut out = vec![(0.0, s.clone())];
        for step in 1..=self.opts.steps {
            let target = step as f64 * self.opts.step_size;
            // Halve the stride on failure; samples are still only emitted at
            // the requested parameters.
            let mut stride = self.opts.step_size;
            loop {
                let goal = if target - t_now > stride * (1.0 + 1e-9) { t_now + stride } else { target };
                match self.advance(&s, &dir, (k, origin, mk), t_now, goal) {
                    Ok(next) => {
                        let disp: Vec<f64> = next.iter().zip(&s).map(|(a, b)| a - b).collect();
                        let dn = disp.iter().map(|x| x * x).sum::<f64>().sqrt();
                        if dn > 0.0 {
                            dir = disp.iter().map(|x| x / dn).collect();
                        }
                        s = next;
                        t_now = goal;
                        if goal == target {
                            break;
                        }
                    }
                    Err(e @ (Error::StalledCorrector(_) | Error::ChartDegenerate(_))) => {
                        stride = (goal - t_now) / 2.0;
                        if stride.abs() < self.opts.step_size / 1024.0 {
                            return Err(e);
                        }
                    }
                    Err(e) => return Err(e),
                }
            }
            out.push((target, s.clone()));
        }
        Ok((k, out))
    }
}

fn samples<P: Parametrization>(
    geometry: &IncidenceGeometry,
    param: &P,
    path: Path,
) -> Result<Vec<Sample>> {
    path.into_iter()
        .map(|(t, s)| {
            let chart = param.chart(&s);
            let residual = max_abs(&residuals(geometry.incidences(), &chart));
            Ok(Sample {
                t,
                realization: Realization::from_chart(geometry.clone(), &chart)?,
                residual,
            })
        })
        .collect()
}

fn pin_names(g: &IncidenceGeometry, pins: &[usize]) -> Vec<String> {
    pins.iter().map(|&j| g.points()[j].clone()).collect()
}

/// Kernel of the pinned rigidity matrix, expanded to full-length motions.
pub fn pinned_motions<S: Scalar>(r: &Realization<S>, pins: &[usize], rel_threshold: f64) -> Result<Vec<Vec<S>>> {
    let pm = rigidity::pin_indices(r, pins)?;
    let full = 2 * (r.geometry().num_points() + r.geometry().num_lines());
    Ok(S::rank_kernel(&pm.matrix, rel_threshold)
        .kernel
        .iter()
        .map(|v| pm.expand(v, full))
        .collect())
}

/// Traces a flex with four points pinned, starting along `motion`
/// (full length, `[lines | points]` layout).
pub fn trace_flex(r: &Realization<f64>, pins: &[usize], motion: &[f64], opts: &FlexOptions) -> Result<FlexTrace> {
    r.check_general_position(pins)?;
    let g = r.geometry();
    let chart = r.affine_chart()?;
    let nl = g.num_lines();
    let base = chart_to_columns(&chart);
    let pinned: Vec<usize> = pins
        .iter()
        .flat_map(|&j| [rigidity::point_column(nl, j), rigidity::point_column(nl, j) + 1])
        .collect();
    let free: Vec<usize> = (0..base.len()).filter(|c| !pinned.contains(c)).collect();
    if motion.len() != base.len() {
        return Err(Error::Dimension {
            expected: base.len(),
            found: motion.len(),
        });
    }
    let s0: Vec<f64> = free.iter().map(|&c| base[c]).collect();
    let m: Vec<f64> = free.iter().map(|&c| motion[c]).collect();
    let param = Pinned {
        incidences: g.incidences(),
        base,
        free,
        num_lines: nl,
    };
    let engine = Engine {
        param: &param,
        incidences: g.incidences(),
        opts,
    };
    let (k, path) = engine.run(s0, &m)?;
    Ok(FlexTrace {
        samples: samples(g, &param, path)?,
        pins: pin_names(g, pins),
        motion: m,
        parameter_coordinate: param.free[k],
    })
}

/// Orbit-matrix columns left free when the orbits of `pins` are held.
fn free_reduced_columns<S: Scalar>(st: &OrbitStructure<S>, pins: &[usize]) -> Vec<usize> {
    let held: Vec<usize> = pins.iter().map(|&j| st.orbit_of[j]).collect();
    (0..st.bases.len())
        .filter(|o| !held.contains(o))
        .flat_map(|o| st.offsets[o]..st.offsets[o] + st.bases[o].cols())
        .collect()
}

/// Orbit-kernel vectors vanishing on the blocks of pinned orbits, as
/// full-length reduced vectors.
pub fn pinned_symmetric_motions<S: Scalar>(
    r: &Realization<S>,
    group: &CorrelationGroup<S>,
    pins: &[usize],
    rel_threshold: f64,
) -> Result<Vec<Vec<S>>> {
    let om = crate::symmetry::build_orbit_matrix(r, group, rel_threshold)?;
    let free = free_reduced_columns(&om.structure, pins);
    let reduced = om.matrix.select_columns(&free);
    let n = om.structure.num_columns();
    Ok(S::rank_kernel(&reduced, rel_threshold)
        .kernel
        .into_iter()
        .map(|v| {
            let mut out = vec![S::zero(); n];
            for (k, &c) in free.iter().enumerate() {
                out[c] = v[k].clone();
            }
            out
        })
        .collect())
}

/// Traces a Γ-symmetric flex in orbit-reduced coordinates. `m_hat` is a
/// full-length orbit-kernel vector; pinning any element of an orbit holds
/// that orbit's representative fixed.
pub fn symmetric_trace_flex(
    r: &Realization<f64>,
    group: &CorrelationGroup<f64>,
    m_hat: &[f64],
    pins: &[usize],
    opts: &FlexOptions,
) -> Result<FlexTrace> {
    let g = r.geometry();
    let structure = orbit_structure(r, group, opts.rank_threshold)?;
    if m_hat.len() != structure.num_columns() {
        return Err(Error::Dimension {
            expected: structure.num_columns(),
            found: m_hat.len(),
        });
    }
    let chart = r.affine_chart()?;
    let rep0: Vec<[f64; 2]> = structure
        .element_orbits
        .iter()
        .map(|o| {
            let e = o[0];
            if e < structure.num_points {
                chart.points[e]
            } else {
                chart.lines[e - structure.num_points]
            }
        })
        .collect();
    let free = free_reduced_columns(&structure, pins);
    let m: Vec<f64> = free.iter().map(|&c| m_hat[c]).collect();
    let s0 = vec![0.0; free.len()];
    let param = Symmetric {
        incidences: g.incidences(),
        structure,
        rep0,
        free,
    };
    let engine = Engine {
        param: &param,
        incidences: g.incidences(),
        opts,
    };
    let (k, path) = engine.run(s0, &m)?;
    Ok(FlexTrace {
        samples: samples(g, &param, path)?,
        pins: pin_names(g, pins),
        motion: m,
        parameter_coordinate: param.free[k],
    })
}

/// Rewrites a reduced vector over the stabilizer bases of `from` in terms of
/// the bases of `to`. Both structures must come from the same configuration
/// and group; only the choice of basis per orbit may differ, as it does
/// between exact and floating point kernels.
pub fn reexpress<S: Scalar>(from: &OrbitStructure<S>, m_hat: &[S], to: &OrbitStructure<f64>) -> Result<Vec<f64>> {
    if from.bases.len() != to.bases.len() || m_hat.len() != from.num_columns() {
        return Err(Error::Dimension {
            expected: from.num_columns(),
            found: m_hat.len(),
        });
    }
    let mut out = Vec::with_capacity(to.num_columns());
    for (o, (bf, bt)) in from.bases.iter().zip(&to.bases).enumerate() {
        if bf.cols() != bt.cols() {
            return Err(Error::Invalid(format!("orbit {o} has stabilizer bases of different size")));
        }
        let block: Vec<f64> = m_hat[from.offsets[o]..from.offsets[o] + bf.cols()]
            .iter()
            .map(Scalar::to_f64)
            .collect();
        let mut v = [0.0; 2];
        for (c, x) in block.iter().enumerate() {
            let col = bf.column(c);
            v[0] += col[0].to_f64() * x;
            v[1] += col[1].to_f64() * x;
        }
        out.extend(lstsq(bt, &v, 1e-12));
    }
    Ok(out)
}

impl FlexTrace {
    pub fn max_residual(&self) -> f64 {
        self.samples.iter().map(|s| s.residual).fold(0.0, f64::max)
    }
}
