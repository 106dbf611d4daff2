//! ℤ₂-invariant metrics on Sⁿ realised in ambient coordinates: the round
//! sphere, ellipsoids {xᵀDx = 1} with the induced metric, and conformal
//! rescalings λ·g_round of the round metric by an even polynomial λ.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::dual::Real;
use crate::error::{Error, Result};

/// One term coeff·Π x_i^{e_i} of a conformal factor.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Monomial {
    pub coeff: f64,
    pub exponents: Vec<u32>,
}

impl Monomial {
    fn eval<S: Real>(&self, x: &[S]) -> S {
        let mut acc = S::cst(self.coeff);
        for (xi, &e) in x.iter().zip(&self.exponents) {
            for _ in 0..e {
                acc = acc * *xi;
            }
        }
        acc
    }

    /// ∂/∂x_j.
    fn eval_partial<S: Real>(&self, x: &[S], j: usize) -> S {
        let ej = self.exponents.get(j).copied().unwrap_or(0);
        if ej == 0 {
            return S::cst(0.0);
        }
        let mut acc = S::cst(self.coeff * ej as f64);
        for (i, (xi, &e)) in x.iter().zip(&self.exponents).enumerate() {
            let e = if i == j { e - 1 } else { e };
            for _ in 0..e {
                acc = acc * *xi;
            }
        }
        acc
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum MetricKind {
    Round,
    /// Semi-axes a_0, …, a_n.
    Ellipsoid(Vec<f64>),
    /// Conformal factor λ as a polynomial in the ambient coordinates.
    Conformal(Vec<Monomial>),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricSpec {
    pub n: u32,
    pub kind: MetricKind,
    /// D in F(x) = xᵀDx (identity off the ellipsoid case).
    #[serde(skip)]
    diag: Vec<f64>,
}

/// Samples used to validate evenness and positivity of a conformal factor.
pub const CONFORMAL_VALIDATION_SAMPLES: usize = 512;

impl MetricSpec {
    pub fn round(n: u32) -> Result<Self> {
        check_n(n)?;
        Ok(MetricSpec { n, kind: MetricKind::Round, diag: vec![1.0; n as usize + 1] })
    }

    pub fn ellipsoid(n: u32, axes: Vec<f64>) -> Result<Self> {
        check_n(n)?;
        if axes.len() != n as usize + 1 {
            return Err(Error::InvalidMetric(format!("ellipsoid needs {} semi-axes, got {}", n + 1, axes.len())));
        }
        if axes.iter().any(|a| !(a.is_finite() && *a > 0.0)) {
            return Err(Error::InvalidMetric("semi-axes must be positive".into()));
        }
        let diag = axes.iter().map(|a| 1.0 / (a * a)).collect();
        Ok(MetricSpec { n, kind: MetricKind::Ellipsoid(axes), diag })
    }

    /// A conformal factor λ; λ(p) = λ(−p) and λ > 0 are checked on seeded
    /// random samples of the sphere.
    pub fn conformal(n: u32, terms: Vec<Monomial>) -> Result<Self> {
        check_n(n)?;
        let dim = n as usize + 1;
        if terms.is_empty() {
            return Err(Error::InvalidMetric("conformal factor has no terms".into()));
        }
        for t in &terms {
            if t.exponents.len() != dim {
                return Err(Error::InvalidMetric(format!("monomial needs {} exponents", dim)));
            }
        }
        let m = MetricSpec { n, kind: MetricKind::Conformal(terms), diag: vec![1.0; dim] };
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for _ in 0..CONFORMAL_VALIDATION_SAMPLES {
            let mut p: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let r = p.iter().map(|x| x * x).sum::<f64>().sqrt();
            if r < 1e-3 {
                continue;
            }
            p.iter_mut().for_each(|x| *x /= r);
            let q: Vec<f64> = p.iter().map(|x| -x).collect();
            let (lp, lq) = (m.lambda(&p), m.lambda(&q));
            if !(lp > 0.0) {
                return Err(Error::InvalidMetric(format!("conformal factor not positive at {:?}", p)));
            }
            if (lp - lq).abs() > 1e-12 * lp.abs().max(1.0) {
                return Err(Error::InvalidMetric(format!("conformal factor is not even: λ(p) = {} but λ(−p) = {}", lp, lq)));
            }
        }
        Ok(m)
    }

    /// `round`, `ellipsoid:a0,a1,…`, or `conformal:c;c1:e0,e1,…;…` where a
    /// bare number is a constant term.
    pub fn parse(s: &str, n: u32) -> Result<Self> {
        let s = s.trim();
        let err = |m: &str| Error::Parse(s.into(), m.into());
        if s == "round" {
            return Self::round(n);
        }
        if let Some(rest) = s.strip_prefix("ellipsoid:") {
            let axes: std::result::Result<Vec<f64>, _> = rest.split(',').map(|t| t.trim().parse::<f64>()).collect();
            return Self::ellipsoid(n, axes.map_err(|_| err("bad semi-axis"))?);
        }
        if let Some(rest) = s.strip_prefix("conformal:") {
            let dim = n as usize + 1;
            let mut terms = Vec::new();
            for part in rest.split(';') {
                let part = part.trim();
                if let Some((c, es)) = part.split_once(':') {
                    let coeff: f64 = c.trim().parse().map_err(|_| err("bad coefficient"))?;
                    let exps: std::result::Result<Vec<u32>, _> = es.split(',').map(|t| t.trim().parse::<u32>()).collect();
                    terms.push(Monomial { coeff, exponents: exps.map_err(|_| err("bad exponent"))? });
                } else {
                    let coeff: f64 = part.parse().map_err(|_| err("bad constant"))?;
                    terms.push(Monomial { coeff, exponents: vec![0; dim] });
                }
            }
            return Self::conformal(n, terms);
        }
        Err(err("expected round, ellipsoid:… or conformal:…"))
    }

    pub fn ambient_dim(&self) -> usize {
        self.n as usize + 1
    }

    pub fn is_round(&self) -> bool {
        matches!(self.kind, MetricKind::Round)
    }

    /// F(x) = xᵀDx; the manifold is F = 1.
    pub fn constraint(&self, x: &[f64]) -> f64 {
        x.iter().zip(&self.diag).map(|(xi, d)| d * xi * xi).sum()
    }

    /// Radial projection onto F = 1.
    pub fn project_point(&self, x: &mut [f64]) {
        let s = self.constraint(x).sqrt();
        x.iter_mut().for_each(|xi| *xi /= s);
    }

    /// ∇F(x) = 2Dx.
    pub fn normal(&self, x: &[f64]) -> Vec<f64> {
        x.iter().zip(&self.diag).map(|(xi, d)| 2.0 * d * xi).collect()
    }

    /// Diagonal of the constraint Hessian, 2D.
    pub fn hessian_diag(&self) -> Vec<f64> {
        self.diag.iter().map(|d| 2.0 * d).collect()
    }

    /// Remove the normal component of v at x.
    pub fn project_velocity(&self, x: &[f64], v: &mut [f64]) {
        let g = self.normal(x);
        let gg: f64 = g.iter().map(|a| a * a).sum();
        let gv: f64 = g.iter().zip(v.iter()).map(|(a, b)| a * b).sum();
        v.iter_mut().zip(&g).for_each(|(vi, gi)| *vi -= gv / gg * gi);
    }

    /// The conformal factor (1 off the conformal case).
    pub fn lambda<S: Real>(&self, x: &[S]) -> S {
        match &self.kind {
            MetricKind::Conformal(terms) => terms.iter().fold(S::cst(0.0), |acc, t| acc + t.eval(x)),
            _ => S::cst(1.0),
        }
    }

    /// g(v, v) at x.
    pub fn norm_sq(&self, x: &[f64], v: &[f64]) -> f64 {
        self.lambda(x) * v.iter().map(|a| a * a).sum::<f64>()
    }

    /// Geodesic acceleration
    /// ẍ = −2(∇φ·v)v + |v|² P∇φ − (vᵀHv / |∇F|²) ∇F, φ = ½ ln λ,
    /// P the projection onto the tangent space, H = 2D.
    pub fn accel<S: Real>(&self, x: &[S], v: &[S], out: &mut [S]) {
        let dim = x.len();
        let two = S::cst(2.0);
        let mut gg = S::cst(0.0);
        let mut vhv = S::cst(0.0);
        for i in 0..dim {
            let d = S::cst(self.diag[i]);
            let gi = two * d * x[i];
            gg = gg + gi * gi;
            vhv = vhv + two * d * v[i] * v[i];
        }
        let coef = vhv / gg;
        for i in 0..dim {
            out[i] = -(coef * two * S::cst(self.diag[i]) * x[i]);
        }
        if let MetricKind::Conformal(terms) = &self.kind {
            let lam = self.lambda(x);
            let mut grad_phi: Vec<S> = (0..dim)
                .map(|j| terms.iter().fold(S::cst(0.0), |acc, t| acc + t.eval_partial(x, j)) / (two * lam))
                .collect();
            // project onto the tangent space of the unit sphere (D = I)
            let mut gx = S::cst(0.0);
            let mut xx = S::cst(0.0);
            for i in 0..dim {
                gx = gx + grad_phi[i] * x[i];
                xx = xx + x[i] * x[i];
            }
            for i in 0..dim {
                grad_phi[i] = grad_phi[i] - gx / xx * x[i];
            }
            let mut dphi_v = S::cst(0.0);
            let mut vv = S::cst(0.0);
            for i in 0..dim {
                dphi_v = dphi_v + grad_phi[i] * v[i];
                vv = vv + v[i] * v[i];
            }
            for i in 0..dim {
                out[i] = out[i] - two * dphi_v * v[i] + vv * grad_phi[i];
            }
        }
    }

    /// A Euclidean-orthonormal basis of the tangent space at p, optionally
    /// also orthogonal to a given vector.
    pub fn tangent_basis(&self, p: &[f64], avoid: Option<&[f64]>) -> Vec<Vec<f64>> {
        let dim = p.len();
        let mut fixed: Vec<Vec<f64>> = vec![unit(&self.normal(p))];
        if let Some(a) = avoid {
            let mut a = a.to_vec();
            orthogonalize(&mut a, &fixed);
            if norm(&a) > 1e-12 {
                fixed.push(unit(&a));
            }
        }
        let skip = fixed.len();
        for k in 0..dim {
            let mut e = vec![0.0; dim];
            e[k] = 1.0;
            orthogonalize(&mut e, &fixed);
            if norm(&e) > 1e-8 {
                fixed.push(unit(&e));
            }
            if fixed.len() == dim {
                break;
            }
        }
        fixed.split_off(skip)
    }
}

fn check_n(n: u32) -> Result<()> {
    if n < 1 {
        return Err(Error::InvalidMetric("sphere dimension must be at least 1".into()));
    }
    Ok(())
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn unit(a: &[f64]) -> Vec<f64> {
    let r = norm(a);
    a.iter().map(|x| x / r).collect()
}

fn orthogonalize(e: &mut [f64], against: &[Vec<f64>]) {
    // twice for numerical safety
    for _ in 0..2 {
        for f in against {
            let c = dot(e, f);
            e.iter_mut().zip(f).for_each(|(ei, fi)| *ei -= c * fi);
        }
    }
}

impl fmt::Display for MetricSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            MetricKind::Round => write!(f, "round"),
            MetricKind::Ellipsoid(a) => {
                write!(f, "ellipsoid:{}", a.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
            }
            MetricKind::Conformal(t) => {
                let parts: Vec<String> = t
                    .iter()
                    .map(|m| format!("{}:{}", m.coeff, m.exponents.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",")))
                    .collect();
                write!(f, "conformal:{}", parts.join(";"))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_variants() {
        assert!(MetricSpec::parse("round", 2).unwrap().is_round());
        let e = MetricSpec::parse("ellipsoid:1,1,1.1", 2).unwrap();
        assert_eq!(e.to_string(), "ellipsoid:1,1,1.1");
        assert!(MetricSpec::parse("ellipsoid:1,1", 2).is_err());
        assert!(MetricSpec::parse("conformal:1;0.1:2,0,0", 2).is_ok());
    }

    #[test]
    fn odd_conformal_factor_is_rejected() {
        let r = MetricSpec::parse("conformal:1;0.1:1,0,0", 2);
        assert!(matches!(r, Err(Error::InvalidMetric(_))));
    }

    #[test]
    fn tangent_basis_is_orthonormal() {
        let m = MetricSpec::ellipsoid(3, vec![1.0, 2.0, 1.5, 1.0]).unwrap();
        let mut p = vec![0.3, 0.5, -0.2, 0.4];
        m.project_point(&mut p);
        let b = m.tangent_basis(&p, None);
        assert_eq!(b.len(), 3);
        let nrm = m.normal(&p);
        for (i, e) in b.iter().enumerate() {
            assert!(dot(e, &nrm).abs() < 1e-12);
            for (j, f) in b.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((dot(e, f) - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn round_acceleration_is_centripetal() {
        let m = MetricSpec::round(2).unwrap();
        let (x, v) = ([1.0, 0.0, 0.0], [0.0, 2.0, 0.0]);
        let mut a = [0.0; 3];
        m.accel(&x, &v, &mut a);
        assert!((a[0] + 4.0).abs() < 1e-14 && a[1].abs() < 1e-14);
    }
}
