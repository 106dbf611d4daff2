//! Critical values of homology classes for the round metric, the critical
//! value inequalities for products, the resonance strip and the density
//! bound. Critical values are exact rational multiples of π.

use num_rational::Rational64;
use num_traits::{Signed, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::coalgebra::{dual_product, CohomologyGenerator, DualProduct};
use crate::error::{Error, Result};
use crate::generator::{Family, Generator};
use crate::report::{CheckReport, Violation};
use crate::sphere::{extended_product, Regime, SphereAlgebraTable};
use crate::GradedElement;

/// A critical value c·π, stored as the exact rational c.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PiMultiple(pub Rational64);

impl PiMultiple {
    pub fn int(k: i64) -> Self {
        PiMultiple(Rational64::from_integer(k))
    }

    pub fn as_f64(self) -> f64 {
        *self.0.numer() as f64 / *self.0.denom() as f64 * std::f64::consts::PI
    }
}

impl std::ops::Add for PiMultiple {
    type Output = PiMultiple;
    fn add(self, o: PiMultiple) -> PiMultiple {
        PiMultiple(self.0 + o.0)
    }
}

impl std::fmt::Display for PiMultiple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0.is_zero() {
            f.write_str("0")
        } else if self.0 == Rational64::from_integer(1) {
            f.write_str("π")
        } else {
            write!(f, "{}π", self.0)
        }
    }
}

impl Serialize for PiMultiple {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

fn even_or_odd_sphere(n: u32) -> Result<Regime> {
    match Regime::for_dimension(n)? {
        Regime::Circle => Err(Error::UnsupportedDimension(n, "critical values are tabulated for n ≥ 2".into())),
        r => Ok(r),
    }
}

/// Round-metric critical value of a homology generator.
///
/// Even n: cr(A_l) = cr(B_l) = (l+1)π, cr(A′_m) = cr(B′_m) = (m+1)π,
/// cr(pt) = cr(fund) = 0.
///
/// Odd n: each class sits at the length of the critical manifold carrying
/// it: loop classes at 2⌈k/2⌉π (A′_k) and 2⌈(k+1)/2⌉π (B′_k), path classes
/// at (2⌊k/2⌋+1)π (A_k), (2⌊(k+1)/2⌋+1)π (B_k) and π (E).
pub fn critical_value(g: &Generator) -> Result<PiMultiple> {
    let regime = even_or_odd_sphere(g.n)?;
    if !g.index.is_integer() || g.index.value() < 0 {
        return Err(Error::IllegalGenerator(*g, "no critical value for this index".into()));
    }
    let k = g.index.value();
    let ceil_half = |x: i64| (x + 1).div_euclid(2);
    let v = match (regime, g.family) {
        (_, Family::Fund) | (Regime::Even, Family::Pt) => 0,
        (Regime::Even, Family::A | Family::B) if k % 2 == 0 => k + 1,
        (Regime::Even, Family::APrime | Family::BPrime) if k % 2 == 1 => k + 1,
        (Regime::OddWithTwoFields, Family::APrime) => 2 * ceil_half(k),
        (Regime::OddWithTwoFields, Family::BPrime) => 2 * ceil_half(k + 1),
        (Regime::OddWithTwoFields, Family::A) => 2 * (k / 2) + 1,
        (Regime::OddWithTwoFields, Family::B) => 2 * ((k + 1) / 2) + 1,
        (Regime::OddWithTwoFields, Family::E) => 1,
        _ => return Err(Error::IllegalGenerator(*g, "not a basis class of this sphere".into())),
    };
    Ok(PiMultiple::int(v))
}

/// Critical value of a cohomology class: that of its dual homology class.
pub fn cohomology_critical_value(n: u32, phi: &CohomologyGenerator) -> Result<PiMultiple> {
    critical_value(&phi.dual(n))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalValueRow {
    pub generator: String,
    pub degree: i64,
    pub cr: PiMultiple,
}

/// Critical values of every generator with index ≤ cutoff.
pub fn critical_value_table(n: u32, cutoff: i64) -> Result<Vec<CriticalValueRow>> {
    let t = SphereAlgebraTable::new(n)?;
    even_or_odd_sphere(n)?;
    t.basis_all(cutoff)
        .into_iter()
        .map(|g| Ok(CriticalValueRow { generator: g.to_string(), degree: g.degree(), cr: critical_value(&g)? }))
        .collect()
}

/// cr(Z) ≤ cr(X) + cr(Y) for every generator Z in the product X·Y, for all
/// pairs of generators up to the cutoff. Pairs where equality holds are
/// listed in the notes count.
#[derive(Debug, Clone, Serialize)]
pub struct SubadditivityReport {
    pub pairs: usize,
    pub nonzero_products: usize,
    pub equalities: usize,
    pub strict: Vec<String>,
    #[serde(skip)]
    pub report: CheckReport,
}

impl SubadditivityReport {
    pub fn passed(&self) -> bool {
        self.report.passed()
    }
}

pub fn check_cr_subadditivity(n: u32, cutoff: i64) -> Result<SubadditivityReport> {
    let t = SphereAlgebraTable::new(n)?;
    even_or_odd_sphere(n)?;
    let basis = t.basis_all(cutoff);
    let mut out = SubadditivityReport { pairs: 0, nonzero_products: 0, equalities: 0, strict: Vec::new(), report: CheckReport::new() };
    for x in &basis {
        for y in &basis {
            out.pairs += 1;
            let prod = t.product_gen(x, y)?;
            if prod.is_zero() {
                continue;
            }
            out.nonzero_products += 1;
            let bound = critical_value(x)? + critical_value(y)?;
            let mut all_equal = true;
            for (z, _) in prod.terms() {
                let cz = critical_value(z)?;
                out.report.record(cz <= bound, || {
                    Violation::new("cr(X·Y) ≤ cr(X) + cr(Y)", vec![x.to_string(), y.to_string()], cz, bound)
                });
                all_equal &= cz == bound;
            }
            if all_equal {
                out.equalities += 1;
            } else {
                out.strict.push(format!("{}·{}", x, y));
            }
        }
    }
    Ok(out)
}

/// cr(φ∘̄ψ) ≥ cr(φ) + cr(ψ) for the dual product on the cohomology of an
/// even sphere.
pub fn check_cohomology_superadditivity(n: u32, cutoff: i64) -> Result<CheckReport> {
    let gens: Vec<CohomologyGenerator> =
        (0..=cutoff).flat_map(|i| [CohomologyGenerator::alpha(i), CohomologyGenerator::beta(i)]).collect();
    let mut rep = CheckReport::new();
    for phi in &gens {
        for psi in &gens {
            if let DualProduct::Signed(_, rho) = dual_product(n, phi, psi)? {
                let (cr, bound) =
                    (cohomology_critical_value(n, &rho)?, cohomology_critical_value(n, phi)? + cohomology_critical_value(n, psi)?);
                rep.record(cr >= bound, || Violation::new("cr(φ∘̄ψ) ≥ cr(φ) + cr(ψ)", vec![phi.to_string(), psi.to_string()], cr, bound));
            }
        }
    }
    Ok(rep)
}

/// The chain A_0, A′_1, A_2, A′_3, … (duals of α_0, α_1, …) with critical
/// values; the second component says whether they strictly increase.
pub fn monotone_cr_chain(n: u32, cutoff: i64) -> Result<(Vec<(Generator, PiMultiple)>, bool)> {
    if Regime::for_dimension(n)? != Regime::Even {
        return Err(Error::UnsupportedDimension(n, "the chain is stated for even spheres".into()));
    }
    let chain: Vec<(Generator, PiMultiple)> = (0..=cutoff)
        .map(|i| {
            let g = CohomologyGenerator::alpha(i).dual(n);
            critical_value(&g).map(|c| (g, c))
        })
        .collect::<Result<_>>()?;
    let increasing = chain.windows(2).all(|w| w[0].1 < w[1].1);
    Ok((chain, increasing))
}

/// Odd spheres: the homotopy equivalence between the path and loop
/// summands moves critical values by at most the shift constant c = π in
/// either direction (A_k ↔ A′_k, B_k ↔ B′_k, E ↔ fund).
pub fn check_odd_shift(n: u32, cutoff: i64) -> Result<CheckReport> {
    if Regime::for_dimension(n)? != Regime::OddWithTwoFields {
        return Err(Error::UnsupportedDimension(n, "the shift check is for odd n ≥ 3".into()));
    }
    let c = PiMultiple::int(1);
    let mut pairs = vec![(Generator::e(n), Generator::fund(n))];
    for k in 0..=cutoff {
        pairs.push((Generator::a(k, n), Generator::a_prime(k, n)));
        pairs.push((Generator::b(k, n), Generator::b_prime(k, n)));
    }
    let mut rep = CheckReport::new();
    for (x, y) in pairs {
        let (cx, cy) = (critical_value(&x)?, critical_value(&y)?);
        rep.record(cy <= cx + c, || Violation::new("cr(Φ_*X) ≤ cr(X) + c", vec![x.to_string()], cy, cx + c));
        rep.record(cx <= cy + c, || Violation::new("cr(Ψ_*Y) ≤ cr(Y) + c", vec![y.to_string()], cx, cy + c));
    }
    Ok(rep)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResonanceRecord {
    pub generator: String,
    pub degree: i64,
    pub cr: PiMultiple,
    /// deg − ᾱ·cr, exact because ᾱ·π is rational.
    pub deviation: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResonanceReport {
    pub n: u32,
    pub cutoff: i64,
    /// The non-nilpotent class whose powers define the mean frequency.
    pub omega: String,
    /// lim cr(ωᵐ)/m, as a multiple of π.
    pub mu: PiMultiple,
    /// ᾱ·π.
    #[serde(serialize_with = "as_string")]
    pub alpha_bar_times_pi: Rational64,
    /// Minimal strip half-width: max |deviation|.
    #[serde(serialize_with = "as_string")]
    pub beta: Rational64,
    pub worst: Vec<String>,
    pub records: Vec<ResonanceRecord>,
    /// Odd n: the shift-constant check; empty for even n.
    #[serde(skip)]
    pub shift: CheckReport,
}

impl ResonanceReport {
    pub fn alpha_bar(&self) -> f64 {
        rational_f64(self.alpha_bar_times_pi) / std::f64::consts::PI
    }

    /// Every class lies in the strip |deg − ᾱ·cr| ≤ β (true by construction
    /// of β) and the shift check passed.
    pub fn inside_strip(&self, beta: Rational64) -> bool {
        self.records.iter().all(|r| r.deviation.parse::<Rational64>().map(|d| d.abs() <= beta).unwrap_or(false)) && self.shift.passed()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "cutoff": self.cutoff,
            "omega": self.omega,
            "mu": self.mu,
            "alpha_bar": format!("{}/π", self.alpha_bar_times_pi),
            "beta": self.beta.to_string(),
            "worst": self.worst,
            "records": self.records,
        })
    }
}

fn as_string<S: serde::Serializer>(r: &Rational64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

fn rational_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Powers ω, ω², … of the mean-frequency class with (degree, cr) of each.
/// Even n: ω = α_1 under the dual product; odd n: ω = B′_0 (the polynomial
/// generator U) under the loop product.
fn omega_powers(n: u32, count: usize) -> Result<(String, Vec<(i64, PiMultiple)>)> {
    let regime = even_or_odd_sphere(n)?;
    let mut out = Vec::with_capacity(count);
    match regime {
        Regime::Even => {
            let omega = CohomologyGenerator::alpha(1);
            let mut cur = omega;
            out.push((cur.degree(n), cohomology_critical_value(n, &cur)?));
            while out.len() < count {
                match dual_product(n, &cur, &omega)? {
                    DualProduct::Signed(_, next) => {
                        cur = next;
                        out.push((cur.degree(n), cohomology_critical_value(n, &cur)?));
                    }
                    DualProduct::Zero => return Err(Error::Unsupported("ω is nilpotent".into())),
                }
            }
            Ok((omega.to_string(), out))
        }
        _ => {
            let t = SphereAlgebraTable::new(n)?;
            let omega = Generator::b_prime(0, n);
            let mut cur = GradedElement::generator(t.ring, omega);
            let one = GradedElement::generator(t.ring, omega);
            loop {
                let (_, g) = cur.as_signed_generator().ok_or_else(|| Error::Unsupported("ω power is not a generator".into()))?;
                out.push((g.degree(), critical_value(&g)?));
                if out.len() == count {
                    break;
                }
                cur = extended_product(&t, &cur, &one)?;
            }
            Ok((omega.to_string(), out))
        }
    }
}

/// Resonance strip for the round metric over all generators of index ≤
/// cutoff: ᾱ is the ratio of degree growth to critical-value growth along
/// the powers of ω (ᾱ = 2(n−1)/μ for even n), β the largest deviation.
pub fn resonance_check(n: u32, cutoff: i64) -> Result<ResonanceReport> {
    let regime = even_or_odd_sphere(n)?;
    let powers_needed = (cutoff.max(4) as usize) / 2 * 2 + 1;
    let (omega, powers) = omega_powers(n, powers_needed)?;
    // slope between the first and last power; same parity keeps the
    // periodic odd-n pattern exact
    let (d0, c0) = powers[0];
    let (d1, c1) = powers[powers.len() - 1];
    let m = (powers.len() - 1) as i64;
    let mu = PiMultiple((c1.0 - c0.0) / Rational64::from_integer(m));
    let alpha_bar_times_pi = Rational64::from_integer(d1 - d0) / (c1.0 - c0.0);
    let t = SphereAlgebraTable::new(n)?;
    let mut records = Vec::new();
    let mut beta = Rational64::zero();
    for g in t.basis_all(cutoff) {
        let cr = critical_value(&g)?;
        let dev = Rational64::from_integer(g.degree()) - alpha_bar_times_pi * cr.0;
        beta = beta.max(dev.abs());
        records.push(ResonanceRecord { generator: g.to_string(), degree: g.degree(), cr, deviation: dev.to_string() });
    }
    let worst = records
        .iter()
        .filter(|r| r.deviation.parse::<Rational64>().map(|d| d.abs() == beta).unwrap_or(false))
        .map(|r| r.generator.clone())
        .collect();
    let shift = if regime == Regime::OddWithTwoFields { check_odd_shift(n, cutoff)? } else { CheckReport::new() };
    Ok(ResonanceReport { n, cutoff, omega, mu, alpha_bar_times_pi, beta, worst, records, shift })
}

/// A geodesic with its computed average index.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityEntry {
    pub label: String,
    pub length: f64,
    pub alpha: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityReport {
    pub n: u32,
    pub alpha_bar: f64,
    pub eps: f64,
    /// Entries whose mean frequency α/ℒ lies in (ᾱ − ε, ᾱ + ε).
    pub in_band: Vec<String>,
    pub sum: f64,
    pub bound: f64,
    /// In-band entries with α = 0 (excluded from the sum).
    pub zero_alpha: Vec<String>,
    pub passed: bool,
}

/// Relative slack when comparing the density sum to its bound.
pub const DENSITY_TOLERANCE: f64 = 1e-9;

/// Σ 1/α over geodesics in the ε-band around ᾱ, compared with 1/(n−1).
/// `alpha_bar` defaults to the round-metric value (n−1)/π.
pub fn density_sum(n: u32, entries: &[DensityEntry], eps: f64, alpha_bar: Option<f64>) -> Result<DensityReport> {
    if Regime::for_dimension(n)? != Regime::Even {
        return Err(Error::UnsupportedDimension(n, "the density bound is stated for even spheres".into()));
    }
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument("ε must be positive".into()));
    }
    let alpha_bar = alpha_bar.unwrap_or((n - 1) as f64 / std::f64::consts::PI);
    let bound = 1.0 / (n - 1) as f64;
    let mut report = DensityReport { n, alpha_bar, eps, in_band: Vec::new(), sum: 0.0, bound, zero_alpha: Vec::new(), passed: false };
    for e in entries {
        if !(e.length > 0.0) {
            return Err(Error::InvalidArgument(format!("geodesic {} has no length", e.label)));
        }
        if (e.alpha / e.length - alpha_bar).abs() < eps {
            if e.alpha == 0.0 {
                report.zero_alpha.push(e.label.clone());
            } else {
                report.in_band.push(e.label.clone());
                report.sum += 1.0 / e.alpha;
            }
        }
    }
    report.passed = report.zero_alpha.is_empty() && report.sum >= bound * (1.0 - DENSITY_TOLERANCE);
    Ok(report)
}
