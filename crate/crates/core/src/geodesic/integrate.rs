//! Fixed-step RK4 integration of the geodesic equation in ambient
//! coordinates, with projection back onto the constraint after every step.

use std::f64::consts::PI;

use serde::Serialize;
use serde_json::{json, Value};

use super::dual::{Dual, Real};
use super::metric::{norm, MetricSpec};
use crate::error::{Error, Result};

/// Steps per π of length unless overridden.
pub const DEFAULT_STEPS_PER_PI: usize = 2000;
/// Allowed |F(x) − 1| before a projection.
pub const DEFAULT_DRIFT_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Serialize)]
pub struct Sample {
    pub t: f64,
    pub x: Vec<f64>,
    pub v: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GeodesicRecord {
    pub p: Vec<f64>,
    pub v: Vec<f64>,
    pub duration: f64,
    pub steps: usize,
    pub samples: Vec<Sample>,
    /// ∫ g(γ̇, γ̇) dt over [0, duration].
    pub energy: f64,
    /// ∫ |γ̇|_g dt over [0, duration].
    pub length: f64,
    /// |γ(T) + γ(0)| + |γ̇(T) + γ̇(0)|.
    pub antipodal_residual: f64,
    /// |γ(T) − γ(0)| + |γ̇(T) − γ̇(0)|.
    pub closed_residual: f64,
    /// Largest |F − 1| seen before a projection.
    pub max_drift: f64,
}

impl GeodesicRecord {
    pub fn end(&self) -> &Sample {
        self.samples.last().expect("a record has at least one sample")
    }

    pub fn to_json(&self) -> Value {
        json!({
            "p": self.p,
            "v": self.v,
            "duration": self.duration,
            "steps": self.steps,
            "energy": self.energy,
            "length": self.length,
            "antipodal_residual": self.antipodal_residual,
            "closed_residual": self.closed_residual,
            "max_drift": self.max_drift,
            "endpoint": self.end().x,
        })
    }
}

/// Steps for a run: `steps_per_pi` per π of g-length, at least `steps_per_pi`.
pub fn steps_for(m: &MetricSpec, p: &[f64], v: &[f64], duration: f64, steps_per_pi: usize) -> usize {
    let len = m.norm_sq(p, v).sqrt() * duration;
    ((len / PI * steps_per_pi as f64).ceil() as usize).max(steps_per_pi)
}

pub(crate) fn check_initial(m: &MetricSpec, p: &[f64], v: &[f64]) -> Result<()> {
    let dim = m.ambient_dim();
    if p.len() != dim || v.len() != dim {
        return Err(Error::InvalidArgument(format!("points and velocities need {} coordinates", dim)));
    }
    if (m.constraint(p) - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument("initial point is not on the sphere".into()));
    }
    let g = m.normal(p);
    if super::metric::dot(&g, v).abs() > 1e-9 * (1.0 + norm(v)) {
        return Err(Error::InvalidArgument("initial velocity is not tangent".into()));
    }
    Ok(())
}

/// State of the geodesic together with any number of linearized variations.
#[derive(Debug, Clone)]
pub(crate) struct State {
    pub x: Vec<f64>,
    pub v: Vec<f64>,
    /// (J, J̇) pairs.
    pub var: Vec<(Vec<f64>, Vec<f64>)>,
}

/// Derivative of the full state: (v, a, J̇, J̈) with J̈ from the dual-number
/// linearization of the acceleration.
fn deriv(m: &MetricSpec, s: &State, out: &mut State) {
    let dim = s.x.len();
    out.x.copy_from_slice(&s.v);
    m.accel(&s.x, &s.v, &mut out.v);
    let mut xd = vec![Dual::cst(0.0); dim];
    let mut vd = vec![Dual::cst(0.0); dim];
    let mut ad = vec![Dual::cst(0.0); dim];
    for (k, (j, jd)) in s.var.iter().enumerate() {
        for i in 0..dim {
            xd[i] = Dual::new(s.x[i], j[i]);
            vd[i] = Dual::new(s.v[i], jd[i]);
        }
        m.accel(&xd, &vd, &mut ad);
        out.var[k].0.copy_from_slice(jd);
        for i in 0..dim {
            out.var[k].1[i] = ad[i].eps;
        }
    }
}

fn axpy(y: &mut State, a: f64, x: &State, base: &State) {
    for i in 0..y.x.len() {
        y.x[i] = base.x[i] + a * x.x[i];
        y.v[i] = base.v[i] + a * x.v[i];
    }
    for (k, (j, jd)) in y.var.iter_mut().enumerate() {
        for i in 0..j.len() {
            j[i] = base.var[k].0[i] + a * x.var[k].0[i];
            jd[i] = base.var[k].1[i] + a * x.var[k].1[i];
        }
    }
}

pub(crate) struct Stepper<'a> {
    m: &'a MetricSpec,
    k: [State; 4],
    tmp: State,
    pub drift_tol: f64,
}

impl<'a> Stepper<'a> {
    pub fn new(m: &'a MetricSpec, proto: &State, drift_tol: f64) -> Self {
        Stepper { m, k: [proto.clone(), proto.clone(), proto.clone(), proto.clone()], tmp: proto.clone(), drift_tol }
    }

    /// One RK4 step of size h, without projection.
    pub fn raw_step(&mut self, s: &State, h: f64, out: &mut State) {
        let m = self.m;
        deriv(m, s, &mut self.k[0]);
        axpy(&mut self.tmp, 0.5 * h, &self.k[0], s);
        deriv(m, &self.tmp, &mut self.k[1]);
        axpy(&mut self.tmp, 0.5 * h, &self.k[1], s);
        deriv(m, &self.tmp, &mut self.k[2]);
        axpy(&mut self.tmp, h, &self.k[2], s);
        deriv(m, &self.tmp, &mut self.k[3]);
        for i in 0..s.x.len() {
            out.x[i] = s.x[i] + h / 6.0 * (self.k[0].x[i] + 2.0 * self.k[1].x[i] + 2.0 * self.k[2].x[i] + self.k[3].x[i]);
            out.v[i] = s.v[i] + h / 6.0 * (self.k[0].v[i] + 2.0 * self.k[1].v[i] + 2.0 * self.k[2].v[i] + self.k[3].v[i]);
        }
        for (q, (j, jd)) in out.var.iter_mut().enumerate() {
            for i in 0..j.len() {
                let kk = |r: usize| &self.k[r].var[q];
                j[i] = s.var[q].0[i] + h / 6.0 * (kk(0).0[i] + 2.0 * kk(1).0[i] + 2.0 * kk(2).0[i] + kk(3).0[i]);
                jd[i] = s.var[q].1[i] + h / 6.0 * (kk(0).1[i] + 2.0 * kk(1).1[i] + 2.0 * kk(2).1[i] + kk(3).1[i]);
            }
        }
    }

    /// RK4 step followed by projection; returns the pre-projection drift.
    pub fn step(&mut self, s: &State, h: f64, out: &mut State, step_no: usize) -> Result<f64> {
        self.raw_step(s, h, out);
        let drift = (self.m.constraint(&out.x) - 1.0).abs();
        if !(drift <= self.drift_tol) {
            return Err(Error::ConstraintDrift { step: step_no, drift });
        }
        project(self.m, out);
        Ok(drift)
    }
}

/// Project the point radially, the velocity onto the tangent space, and the
/// variations onto the linearized constraints ∇F·J = 0,
/// ∇F·J̇ + vᵀHJ = 0.
pub(crate) fn project(m: &MetricSpec, s: &mut State) {
    m.project_point(&mut s.x);
    m.project_velocity(&s.x, &mut s.v);
    let g = m.normal(&s.x);
    let gg: f64 = g.iter().map(|a| a * a).sum();
    let hdiag = m.hessian_diag();
    for (j, jd) in s.var.iter_mut() {
        let gj = super::metric::dot(&g, j);
        j.iter_mut().zip(&g).for_each(|(a, b)| *a -= gj / gg * b);
        let vhj: f64 = (0..j.len()).map(|i| s.v[i] * hdiag[i] * j[i]).sum();
        let gjd = super::metric::dot(&g, jd) + vhj;
        jd.iter_mut().zip(&g).for_each(|(a, b)| *a -= gjd / gg * b);
    }
}

/// Integrate over [0, duration] with a fixed number of steps, keeping every
/// grid point.
pub fn integrate_geodesic(m: &MetricSpec, p: &[f64], v: &[f64], duration: f64, steps: usize) -> Result<GeodesicRecord> {
    integrate_with_tolerance(m, p, v, duration, steps, DEFAULT_DRIFT_TOLERANCE)
}

pub fn integrate_with_tolerance(
    m: &MetricSpec,
    p: &[f64],
    v: &[f64],
    duration: f64,
    steps: usize,
    drift_tol: f64,
) -> Result<GeodesicRecord> {
    check_initial(m, p, v)?;
    if steps == 0 {
        return Err(Error::InvalidArgument("steps must be at least 1".into()));
    }
    if !(duration > 0.0) {
        return Err(Error::InvalidArgument("duration must be positive".into()));
    }
    let h = duration / steps as f64;
    let mut s = State { x: p.to_vec(), v: v.to_vec(), var: Vec::new() };
    let mut next = s.clone();
    let mut stepper = Stepper::new(m, &s, drift_tol);
    let mut samples = Vec::with_capacity(steps + 1);
    samples.push(Sample { t: 0.0, x: s.x.clone(), v: s.v.clone() });
    let mut max_drift: f64 = 0.0;
    for k in 0..steps {
        max_drift = max_drift.max(stepper.step(&s, h, &mut next, k + 1)?);
        std::mem::swap(&mut s, &mut next);
        samples.push(Sample { t: (k + 1) as f64 * h, x: s.x.clone(), v: s.v.clone() });
    }
    Ok(finish(m, p, v, duration, steps, samples, max_drift))
}

fn finish(m: &MetricSpec, p: &[f64], v: &[f64], duration: f64, steps: usize, samples: Vec<Sample>, max_drift: f64) -> GeodesicRecord {
    let h = duration / steps as f64;
    let dens: Vec<f64> = samples.iter().map(|s| m.norm_sq(&s.x, &s.v)).collect();
    let (energy, length) = if steps % 2 == 0 {
        (simpson(&dens, h), simpson(&dens.iter().map(|d| d.sqrt()).collect::<Vec<_>>(), h))
    } else {
        (trapezoid(&dens, h), trapezoid(&dens.iter().map(|d| d.sqrt()).collect::<Vec<_>>(), h))
    };
    let end = samples.last().expect("nonempty");
    let dist = |a: &[f64], b: &[f64], sign: f64| a.iter().zip(b).map(|(x, y)| (x + sign * y).powi(2)).sum::<f64>().sqrt();
    let antipodal_residual = dist(&end.x, p, 1.0) + dist(&end.v, v, 1.0);
    let closed_residual = dist(&end.x, p, -1.0) + dist(&end.v, v, -1.0);
    GeodesicRecord {
        p: p.to_vec(),
        v: v.to_vec(),
        duration,
        steps,
        energy,
        length,
        antipodal_residual,
        closed_residual,
        max_drift,
        samples,
    }
}

fn simpson(f: &[f64], h: f64) -> f64 {
    let n = f.len() - 1;
    let mut s = f[0] + f[n];
    for (i, v) in f.iter().enumerate().take(n).skip(1) {
        s += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
    }
    s * h / 3.0
}

fn trapezoid(f: &[f64], h: f64) -> f64 {
    let n = f.len() - 1;
    (f[0] + f[n]) * h / 2.0 + f[1..n].iter().sum::<f64>() * h
}

/// Endpoint only (no samples kept); used inside the shooting loop.
pub(crate) fn endpoint(m: &MetricSpec, p: &[f64], v: &[f64], steps: usize, drift_tol: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let h = 1.0 / steps as f64;
    let mut s = State { x: p.to_vec(), v: v.to_vec(), var: Vec::new() };
    let mut next = s.clone();
    let mut stepper = Stepper::new(m, &s, drift_tol);
    for k in 0..steps {
        stepper.step(&s, h, &mut next, k + 1)?;
        std::mem::swap(&mut s, &mut next);
    }
    Ok((s.x, s.v))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_turn_reaches_the_antipode() {
        let m = MetricSpec::round(2).unwrap();
        let r = integrate_geodesic(&m, &[1.0, 0.0, 0.0], &[0.0, PI, 0.0], 1.0, 2000).unwrap();
        assert!(r.antipodal_residual < 1e-8, "{}", r.antipodal_residual);
        assert!((r.energy - PI * PI).abs() < 1e-9);
    }

    #[test]
    fn off_manifold_start_is_rejected() {
        let m = MetricSpec::round(2).unwrap();
        assert!(integrate_geodesic(&m, &[1.1, 0.0, 0.0], &[0.0, 1.0, 0.0], 1.0, 10).is_err());
        assert!(integrate_geodesic(&m, &[1.0, 0.0, 0.0], &[1.0, 1.0, 0.0], 1.0, 10).is_err());
    }

    #[test]
    fn drift_beyond_tolerance_reports_the_step() {
        let m = MetricSpec::round(2).unwrap();
        // far too few steps for a fast geodesic
        let r = integrate_with_tolerance(&m, &[1.0, 0.0, 0.0], &[0.0, 40.0, 0.0], 1.0, 10, 1e-6);
        assert!(matches!(r, Err(Error::ConstraintDrift { step: 1, .. })), "{:?}", r.map(|g| g.max_drift));
    }
}
