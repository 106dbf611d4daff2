//! Numerical geodesics on ℤ₂-invariant metrics on Sⁿ: integration,
//! antipodal shooting, Morse indices from conjugate points, average indices,
//! and the round-metric critical-value bookkeeping behind the resonance and
//! density checks.

mod dual;
pub mod integrate;
pub mod jacobi;
pub mod metric;
pub mod resonance;
pub mod shooting;

use rayon::prelude::*;
use serde::Serialize;

pub use dual::{Dual, Real};
pub use integrate::{integrate_geodesic, integrate_with_tolerance, steps_for, GeodesicRecord, Sample};
pub use jacobi::{
    average_index, conjugate_points, endpoint_kernel, jacobi_index, jacobi_vs_finite_difference, AverageIndex, FdComparison,
    IndexOptions, IndexReport, KernelReport,
};
pub use metric::{MetricKind, MetricSpec, Monomial};
pub use resonance::{
    check_cohomology_superadditivity, check_cr_subadditivity, critical_value, critical_value_table, density_sum,
    monotone_cr_chain, resonance_check, DensityEntry, DensityReport, PiMultiple, ResonanceReport,
};
pub use shooting::{shoot_antipodal, ShootingOptions, ShootingResult};

use crate::error::Result;

/// One row of a length/index scatter: a converged antipodal geodesic.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumRow {
    pub length: f64,
    pub energy: f64,
    pub index: usize,
    /// The endpoint map is degenerate (positive nullity).
    pub nullity_flag: bool,
}

/// Shoot from every guess in parallel; results come back in input order.
pub fn spectrum_scan(
    m: &MetricSpec,
    p: &[f64],
    guesses: &[Vec<f64>],
    shooting: &ShootingOptions,
    index: &IndexOptions,
) -> Vec<Result<SpectrumRow>> {
    guesses
        .par_iter()
        .map(|v0| {
            let s = shoot_antipodal(m, p, v0, shooting)?;
            let ind = jacobi_index(m, &s.record, index)?;
            let ker = endpoint_kernel(m, &s.record, index)?;
            Ok(SpectrumRow { length: s.record.length, energy: s.record.energy, index: ind.index, nullity_flag: ker.dimension > 0 })
        })
        .collect()
}

/// A point and a tangent vector of the given Euclidean length, both
/// uniformly random (direction) from a seeded generator.
pub fn random_tangent(m: &MetricSpec, p: &[f64], speed: f64, rng: &mut impl rand::Rng) -> Vec<f64> {
    let basis = m.tangent_basis(p, None);
    loop {
        let c: Vec<f64> = basis.iter().map(|_| rng.gen_range(-1.0..1.0)).collect();
        let r = c.iter().map(|x| x * x).sum::<f64>().sqrt();
        if r > 1e-3 && r <= 1.0 {
            let mut v = vec![0.0; p.len()];
            for (ci, e) in c.iter().zip(&basis) {
                v.iter_mut().zip(e).for_each(|(vi, ei)| *vi += ci / r * speed * ei);
            }
            return v;
        }
    }
}
