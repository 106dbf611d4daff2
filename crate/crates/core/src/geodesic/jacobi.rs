//! Jacobi fields along a geodesic: conjugate points and the Morse index,
//! the nullity of the antipodal endpoint map, average indices of iterates,
//! and a finite-difference cross-check of the linearized flow.

use nalgebra::DMatrix;
use serde::Serialize;

use super::integrate::{project, GeodesicRecord, State, Stepper, DEFAULT_DRIFT_TOLERANCE, DEFAULT_STEPS_PER_PI};
use super::metric::{dot, MetricSpec};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndexOptions {
    /// Relative singular values below this count towards a kernel.
    pub null_threshold: f64,
    /// Relative singular values in [null_threshold, ambiguous_upper) are
    /// flagged rather than decided.
    pub ambiguous_upper: f64,
    /// Grid minima of the smallest singular value below this (relative)
    /// are refined as conjugate-point candidates.
    pub candidate_threshold: f64,
    /// Largest boundary residual accepted for the input geodesic.
    pub residual_tol: f64,
    pub steps_per_pi: usize,
    pub drift_tol: f64,
}

impl Default for IndexOptions {
    fn default() -> Self {
        IndexOptions {
            null_threshold: 1e-7,
            ambiguous_upper: 1e-5,
            candidate_threshold: 1e-2,
            residual_tol: 1e-6,
            steps_per_pi: DEFAULT_STEPS_PER_PI,
            drift_tol: DEFAULT_DRIFT_TOLERANCE,
        }
    }
}

/// Conjugate times at or beyond `duration − END_EXCLUSION` are not interior.
pub const END_EXCLUSION: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConjugatePoint {
    pub t: f64,
    pub multiplicity: usize,
    /// Relative singular values of the transverse Jacobi matrix at t.
    pub singular_values: Vec<f64>,
}

/// A candidate whose singular values fall into the ambiguous band.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AmbiguousDetection {
    pub t: f64,
    pub singular_values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndexReport {
    pub duration: f64,
    pub conjugate_points: Vec<ConjugatePoint>,
    /// Sum of the multiplicities of the interior conjugate points.
    pub index: usize,
    /// Number of transverse Jacobi fields vanishing at the final time.
    pub kernel_at_end: usize,
    pub ambiguous: Vec<AmbiguousDetection>,
}

impl IndexReport {
    /// No candidate landed in the ambiguous band.
    pub fn is_decided(&self) -> bool {
        self.ambiguous.is_empty()
    }
}

fn check_critical(g: &GeodesicRecord, o: &IndexOptions) -> Result<()> {
    let r = g.antipodal_residual.min(g.closed_residual);
    if !(r <= o.residual_tol) {
        return Err(Error::InvalidArgument(format!(
            "geodesic boundary residual {:.3e} exceeds {:.1e}; shoot first",
            r, o.residual_tol
        )));
    }
    Ok(())
}

/// Grid states of the geodesic and its variations on [0, duration].
pub(crate) fn integrate_variations(
    m: &MetricSpec,
    p: &[f64],
    v: &[f64],
    var: Vec<(Vec<f64>, Vec<f64>)>,
    duration: f64,
    steps: usize,
    drift_tol: f64,
) -> Result<Vec<State>> {
    let h = duration / steps as f64;
    let mut s = State { x: p.to_vec(), v: v.to_vec(), var };
    project(m, &mut s);
    let mut stepper = Stepper::new(m, &s, drift_tol);
    let mut out = Vec::with_capacity(steps + 1);
    out.push(s.clone());
    let mut next = s.clone();
    for k in 0..steps {
        stepper.step(out.last().expect("nonempty"), h, &mut next, k + 1)?;
        out.push(next.clone());
    }
    Ok(out)
}

fn steps_for_duration(m: &MetricSpec, g: &GeodesicRecord, duration: f64, o: &IndexOptions) -> usize {
    super::integrate::steps_for(m, &g.p, &g.v, duration, o.steps_per_pi)
}

/// Singular values of the (n+1)×(n−1) matrix of transverse Jacobi fields.
fn jacobi_singular_values(s: &State) -> Vec<f64> {
    if s.var.is_empty() {
        return Vec::new();
    }
    let mat = DMatrix::from_fn(s.x.len(), s.var.len(), |i, j| s.var[j].0[i]);
    let mut sv: Vec<f64> = mat.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| a.partial_cmp(b).expect("finite singular values"));
    sv
}

/// Transverse frame J(0) = 0, J̇(0) = e_i with e_i ⊥ v.
fn transverse_frame(m: &MetricSpec, p: &[f64], v: &[f64]) -> Vec<(Vec<f64>, Vec<f64>)> {
    m.tangent_basis(p, Some(v)).into_iter().map(|e| (vec![0.0; p.len()], e)).collect()
}

/// Conjugate points of γ(0) along the geodesic with initial data (p, v) on
/// the interval (0, duration).
pub fn conjugate_points(m: &MetricSpec, p: &[f64], v: &[f64], duration: f64, steps: usize, o: &IndexOptions) -> Result<IndexReport> {
    let frame = transverse_frame(m, p, v);
    let grid = integrate_variations(m, p, v, frame, duration, steps, o.drift_tol)?;
    let h = duration / steps as f64;
    let svs: Vec<Vec<f64>> = grid.iter().map(jacobi_singular_values).collect();
    let scale = svs.iter().filter_map(|s| s.last().copied()).fold(0.0_f64, f64::max);
    let rel = |sv: &[f64]| -> Vec<f64> { sv.iter().map(|s| s / scale).collect() };
    let mut conjugate_points = Vec::new();
    let mut ambiguous = Vec::new();
    if scale > 0.0 {
        let smin: Vec<f64> = svs.iter().map(|s| s[0] / scale).collect();
        let mut stepper = Stepper::new(m, &grid[0], f64::INFINITY);
        let margin = 3.0 * h;
        for i in 1..grid.len() - 1 {
            let t = i as f64 * h;
            if t < margin || smin[i] > o.candidate_threshold || smin[i] > smin[i - 1] || smin[i] > smin[i + 1] {
                continue;
            }
            // golden-section refinement of the smallest singular value on
            // [t_{i−1}, t_{i+1}], states from partial steps off grid point i−1
            let base = &grid[i - 1];
            let mut tmp = base.clone();
            let mut eval = |dt: f64| -> Vec<f64> {
                stepper.raw_step(base, dt, &mut tmp);
                project(m, &mut tmp);
                rel(&jacobi_singular_values(&tmp))
            };
            let phi = (5f64.sqrt() - 1.0) / 2.0;
            let (mut a, mut b) = (0.0, 2.0 * h);
            let mut c = b - phi * (b - a);
            let mut d = a + phi * (b - a);
            let (mut fc, mut fd) = (eval(c)[0], eval(d)[0]);
            while b - a > 1e-14 * duration.max(1.0) {
                if fc <= fd {
                    b = d;
                    d = c;
                    fd = fc;
                    c = b - phi * (b - a);
                    fc = eval(c)[0];
                } else {
                    a = c;
                    c = d;
                    fc = fd;
                    d = a + phi * (b - a);
                    fd = eval(d)[0];
                }
            }
            let dt = 0.5 * (a + b);
            let tc = (i - 1) as f64 * h + dt;
            if tc > duration - END_EXCLUSION {
                continue;
            }
            let sv = eval(dt);
            if sv.iter().any(|s| *s >= o.null_threshold && *s < o.ambiguous_upper) {
                ambiguous.push(AmbiguousDetection { t: tc, singular_values: sv });
                continue;
            }
            let multiplicity = sv.iter().filter(|s| **s < o.null_threshold).count();
            if multiplicity > 0 {
                conjugate_points.push(ConjugatePoint { t: tc, multiplicity, singular_values: sv });
            }
        }
    }
    let end = svs.last().map(|s| rel(s)).unwrap_or_default();
    let kernel_at_end = if scale > 0.0 { end.iter().filter(|s| **s < o.null_threshold).count() } else { 0 };
    let index = conjugate_points.iter().map(|c| c.multiplicity).sum();
    Ok(IndexReport { duration, conjugate_points, index, kernel_at_end, ambiguous })
}

/// Morse index of an antipodal (or closed) geodesic on [0, 1], counted by
/// interior conjugate points.
pub fn jacobi_index(m: &MetricSpec, g: &GeodesicRecord, o: &IndexOptions) -> Result<IndexReport> {
    check_critical(g, o)?;
    let steps = steps_for_duration(m, g, g.duration, o);
    conjugate_points(m, &g.p, &g.v, g.duration, steps, o)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelReport {
    pub dimension: usize,
    /// Relative singular values of the linearized endpoint map, ascending.
    pub singular_values: Vec<f64>,
    pub ambiguous: bool,
}

/// Variations of the initial data (δp, δv) tangent to the space of unit-
/// constraint initial conditions: n position directions (with the velocity
/// correction that keeps it tangent) and n velocity directions.
fn initial_variations(m: &MetricSpec, p: &[f64], v: &[f64]) -> Vec<(Vec<f64>, Vec<f64>)> {
    let basis = m.tangent_basis(p, None);
    let dim = p.len();
    let np = m.normal(p);
    let npp = dot(&np, &np);
    let hd = m.hessian_diag();
    let mut out = Vec::with_capacity(2 * basis.len());
    for a in &basis {
        // ∇F·b + vᵀHa = 0
        let vha: f64 = (0..dim).map(|i| v[i] * hd[i] * a[i]).sum();
        let b: Vec<f64> = np.iter().map(|x| -vha / npp * x).collect();
        out.push((a.clone(), b));
    }
    for w in &basis {
        out.push((vec![0.0; dim], w.clone()));
    }
    out
}

/// Kernel of the derivative of (p, v) ↦ (γ(1) + p, γ̇(1) + v): the nullity
/// of the geodesic as a critical point of the energy on the antipodal path
/// space.
pub fn endpoint_kernel(m: &MetricSpec, g: &GeodesicRecord, o: &IndexOptions) -> Result<KernelReport> {
    check_critical(g, o)?;
    let var = initial_variations(m, &g.p, &g.v);
    let steps = steps_for_duration(m, g, g.duration, o);
    let grid = integrate_variations(m, &g.p, &g.v, var.clone(), g.duration, steps, o.drift_tol)?;
    let end = grid.last().expect("nonempty");
    let dim = g.p.len();
    let mat = DMatrix::from_fn(2 * dim, var.len(), |i, j| {
        if i < dim {
            end.var[j].0[i] + var[j].0[i]
        } else {
            end.var[j].1[i - dim] + var[j].1[i - dim]
        }
    });
    let mut sv: Vec<f64> = mat.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| a.partial_cmp(b).expect("finite singular values"));
    let top = sv.last().copied().unwrap_or(0.0);
    let singular_values: Vec<f64> = sv.iter().map(|s| if top > 0.0 { s / top } else { 0.0 }).collect();
    let dimension = singular_values.iter().filter(|s| **s < o.null_threshold).count();
    let ambiguous = singular_values.iter().any(|s| *s >= o.null_threshold && *s < o.ambiguous_upper);
    Ok(KernelReport { dimension, singular_values, ambiguous })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AverageIndex {
    /// Slope of the least-squares affine fit of ind(γᵏ) against k.
    pub alpha: f64,
    pub intercept: f64,
    /// (k, ind(γᵏ)) for k = 1..=k_max.
    pub iterates: Vec<(usize, usize)>,
    pub ambiguous: Vec<AmbiguousDetection>,
}

/// Average index lim ind(γᵏ)/k of a geodesic whose projection to ℝPⁿ is
/// closed with period equal to its duration: the Jacobi integration is
/// extended over k_max periods and ind(γᵏ) counts conjugate times before k.
pub fn average_index(m: &MetricSpec, g: &GeodesicRecord, k_max: usize, o: &IndexOptions) -> Result<AverageIndex> {
    check_critical(g, o)?;
    if k_max < 2 {
        return Err(Error::InvalidArgument("k_max must be at least 2 for a slope".into()));
    }
    let period = g.duration;
    let total = period * k_max as f64;
    let steps = steps_for_duration(m, g, total, o);
    let report = conjugate_points(m, &g.p, &g.v, total, steps, o)?;
    let iterates: Vec<(usize, usize)> = (1..=k_max)
        .map(|k| {
            let cut = k as f64 * period - END_EXCLUSION;
            (k, report.conjugate_points.iter().filter(|c| c.t < cut).map(|c| c.multiplicity).sum())
        })
        .collect();
    let nk = k_max as f64;
    let mx = iterates.iter().map(|(k, _)| *k as f64).sum::<f64>() / nk;
    let my = iterates.iter().map(|(_, i)| *i as f64).sum::<f64>() / nk;
    let sxy: f64 = iterates.iter().map(|(k, i)| (*k as f64 - mx) * (*i as f64 - my)).sum();
    let sxx: f64 = iterates.iter().map(|(k, _)| (*k as f64 - mx).powi(2)).sum();
    let alpha = sxy / sxx;
    Ok(AverageIndex { alpha, intercept: my - alpha * mx, iterates, ambiguous: report.ambiguous })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldComparison {
    pub field: String,
    pub relative_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FdComparison {
    pub fields: Vec<FieldComparison>,
    pub max_relative_error: f64,
}

/// Compare Jacobi fields at the final time with central finite differences
/// of perturbed geodesic endpoints, for every initial variation.
pub fn jacobi_vs_finite_difference(m: &MetricSpec, g: &GeodesicRecord, fd_step: f64, o: &IndexOptions) -> Result<FdComparison> {
    let var = initial_variations(m, &g.p, &g.v);
    let steps = steps_for_duration(m, g, g.duration, o);
    let grid = integrate_variations(m, &g.p, &g.v, var.clone(), g.duration, steps, o.drift_tol)?;
    let end = grid.last().expect("nonempty");
    let dim = g.p.len();
    let mut fields = Vec::with_capacity(var.len());
    for (j, (a, b)) in var.iter().enumerate() {
        let perturbed = |s: f64| -> Result<State> {
            let mut p: Vec<f64> = g.p.iter().zip(a).map(|(x, y)| x + s * y).collect();
            m.project_point(&mut p);
            let mut v: Vec<f64> = g.v.iter().zip(b).map(|(x, y)| x + s * y).collect();
            m.project_velocity(&p, &mut v);
            let grid = integrate_variations(m, &p, &v, Vec::new(), g.duration, steps, o.drift_tol)?;
            Ok(grid.into_iter().last().expect("nonempty"))
        };
        let (sp, sm) = (perturbed(fd_step)?, perturbed(-fd_step)?);
        let mut err = 0.0;
        let mut size = 0.0;
        for i in 0..dim {
            let dx = (sp.x[i] - sm.x[i]) / (2.0 * fd_step);
            let dv = (sp.v[i] - sm.v[i]) / (2.0 * fd_step);
            err += (dx - end.var[j].0[i]).powi(2) + (dv - end.var[j].1[i]).powi(2);
            size += end.var[j].0[i].powi(2) + end.var[j].1[i].powi(2);
        }
        let label = if j < var.len() / 2 { format!("position[{}]", j) } else { format!("velocity[{}]", j - var.len() / 2) };
        fields.push(FieldComparison { field: label, relative_error: (err / size).sqrt() });
    }
    let max_relative_error = fields.iter().map(|f| f.relative_error).fold(0.0, f64::max);
    Ok(FdComparison { fields, max_relative_error })
}
