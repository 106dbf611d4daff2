//! Extension algebras A ⊕ B built from an algebra A, an A-bimodule B and a
//! pairing B ⊗ B → A. A-generators are the loop-space tagged ones,
//! B-generators the path-space tagged ones.

use std::collections::BTreeMap;

use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::element::GradedElement;
use crate::error::{Error, Result};
use crate::generator::{Generator, Space};
use crate::report::{CheckReport, Violation};
use crate::ring::{c, CoefficientRing};

pub trait AlgebraSpec: Sync {
    fn ring(&self) -> CoefficientRing;
    fn unit(&self) -> Generator;
    fn mul_gen(&self, x: &Generator, y: &Generator) -> Result<GradedElement>;
    /// Basis generators with |index| ≤ cutoff.
    fn basis(&self, cutoff: i64) -> Vec<Generator>;

    fn multiply(&self, x: &GradedElement, y: &GradedElement) -> Result<GradedElement> {
        bilinear(self.ring(), x, y, |a, b| self.mul_gen(a, b))
    }

    fn unit_element(&self) -> GradedElement {
        GradedElement::generator(self.ring(), self.unit())
    }
}

pub trait BimoduleSpec: Sync {
    fn left_action(&self, a: &Generator, x: &Generator) -> Result<GradedElement>;
    fn right_action(&self, x: &Generator, a: &Generator) -> Result<GradedElement>;
    fn module_basis(&self, cutoff: i64) -> Vec<Generator>;
}

pub trait PairingSpec: Sync {
    fn pair(&self, x: &Generator, y: &Generator) -> Result<GradedElement>;
}

/// Extend a generator-level rule bilinearly.
pub fn bilinear<F>(ring: CoefficientRing, x: &GradedElement, y: &GradedElement, f: F) -> Result<GradedElement>
where
    F: Fn(&Generator, &Generator) -> Result<GradedElement>,
{
    if x.ring() != ring {
        return Err(Error::RingMismatch(ring, x.ring()));
    }
    if y.ring() != ring {
        return Err(Error::RingMismatch(ring, y.ring()));
    }
    let mut out = GradedElement::zero(ring);
    for (gx, kx) in x.terms() {
        for (gy, ky) in y.terms() {
            let p = f(gx, gy)?;
            out.add_scaled(&p, &(kx * ky))?;
        }
    }
    Ok(out)
}

fn is_a(g: &Generator) -> bool {
    g.space == Space::LoopSpace
}

/// The algebra A ⊕ B with (a,x)(b,y) = (ab + x∧y, a*_l y + x*_r b).
#[derive(Clone, Copy)]
pub struct Extension<'a> {
    pub a: &'a dyn AlgebraSpec,
    pub b: &'a dyn BimoduleSpec,
    pub p: &'a dyn PairingSpec,
}

pub fn build_extension<'a>(
    a: &'a dyn AlgebraSpec,
    b: &'a dyn BimoduleSpec,
    p: &'a dyn PairingSpec,
) -> Extension<'a> {
    Extension { a, b, p }
}

impl AlgebraSpec for Extension<'_> {
    fn ring(&self) -> CoefficientRing {
        self.a.ring()
    }

    fn unit(&self) -> Generator {
        self.a.unit()
    }

    fn mul_gen(&self, x: &Generator, y: &Generator) -> Result<GradedElement> {
        match (is_a(x), is_a(y)) {
            (true, true) => self.a.mul_gen(x, y),
            (true, false) => self.b.left_action(x, y),
            (false, true) => self.b.right_action(x, y),
            (false, false) => self.p.pair(x, y),
        }
    }

    fn basis(&self, cutoff: i64) -> Vec<Generator> {
        let mut v = self.a.basis(cutoff);
        v.extend(self.b.module_basis(cutoff));
        v.sort();
        v.dedup();
        v
    }
}

/// A ⊕ A with (a,x)(b,y) = (ab + xy, ay + xb). The second summand is
/// realised through [`Generator::twin`].
pub struct TrivialExtension<'a> {
    pub a: &'a dyn AlgebraSpec,
}

pub fn build_trivial_extension(a: &dyn AlgebraSpec) -> TrivialExtension<'_> {
    TrivialExtension { a }
}

fn twin_of(g: &Generator) -> Result<Generator> {
    g.twin().ok_or_else(|| Error::IllegalGenerator(*g, "has no partner in the trivial extension".into()))
}

fn twin_element(e: &GradedElement) -> Result<GradedElement> {
    let mut out = GradedElement::zero(e.ring());
    for (g, k) in e.terms() {
        out.add_term(twin_of(g)?, k.clone())?;
    }
    Ok(out)
}

impl TrivialExtension<'_> {
    fn extension(&self) -> Extension<'_> {
        Extension { a: self.a, b: self, p: self }
    }
}

impl BimoduleSpec for TrivialExtension<'_> {
    fn left_action(&self, a: &Generator, x: &Generator) -> Result<GradedElement> {
        twin_element(&self.a.mul_gen(a, &twin_of(x)?)?)
    }

    fn right_action(&self, x: &Generator, a: &Generator) -> Result<GradedElement> {
        twin_element(&self.a.mul_gen(&twin_of(x)?, a)?)
    }

    fn module_basis(&self, cutoff: i64) -> Vec<Generator> {
        self.a.basis(cutoff).iter().filter_map(|g| g.twin()).collect()
    }
}

impl PairingSpec for TrivialExtension<'_> {
    fn pair(&self, x: &Generator, y: &Generator) -> Result<GradedElement> {
        self.a.mul_gen(&twin_of(x)?, &twin_of(y)?)
    }
}

impl AlgebraSpec for TrivialExtension<'_> {
    fn ring(&self) -> CoefficientRing {
        self.a.ring()
    }
    fn unit(&self) -> Generator {
        self.a.unit()
    }
    fn mul_gen(&self, x: &Generator, y: &Generator) -> Result<GradedElement> {
        self.extension().mul_gen(x, y)
    }
    fn basis(&self, cutoff: i64) -> Vec<Generator> {
        self.extension().basis(cutoff)
    }
}

/// ℤ[U] (or R[U]) with basis U^k = `U[k]`; the smallest test algebra.
pub struct PolynomialU {
    pub n: u32,
    pub ring: CoefficientRing,
}

impl AlgebraSpec for PolynomialU {
    fn ring(&self) -> CoefficientRing {
        self.ring
    }
    fn unit(&self) -> Generator {
        Generator::u(0, self.n)
    }
    fn mul_gen(&self, x: &Generator, y: &Generator) -> Result<GradedElement> {
        for g in [x, y] {
            if g.family != crate::generator::Family::U || !g.index.is_integer() || g.index.value() < 0 {
                return Err(Error::IllegalGenerator(*g, "not a power of U".into()));
            }
        }
        Ok(GradedElement::generator(self.ring, Generator::u(x.index.value() + y.index.value(), self.n)))
    }
    fn basis(&self, cutoff: i64) -> Vec<Generator> {
        (0..=cutoff).map(|k| Generator::u(k, self.n)).collect()
    }
}

fn names(gs: &[&Generator]) -> Vec<String> {
    gs.iter().map(|g| g.to_string()).collect()
}

/// Evaluate the four adaptedness identities on every generator triple with
/// index ≤ cutoff.
pub fn check_adapted(
    a: &dyn AlgebraSpec,
    b: &dyn BimoduleSpec,
    p: &dyn PairingSpec,
    cutoff: i64,
) -> Result<CheckReport> {
    let ring = a.ring();
    let abasis = a.basis(cutoff);
    let bbasis = b.module_basis(cutoff);
    let gen = |g: &Generator| GradedElement::generator(ring, *g);
    let amul = |x: &GradedElement, y: &GradedElement| bilinear(ring, x, y, |s, t| a.mul_gen(s, t));
    let pair = |x: &GradedElement, y: &GradedElement| bilinear(ring, x, y, |s, t| p.pair(s, t));
    let left = |x: &GradedElement, y: &GradedElement| bilinear(ring, x, y, |s, t| b.left_action(s, t));
    let right = |x: &GradedElement, y: &GradedElement| bilinear(ring, x, y, |s, t| b.right_action(s, t));

    // One task per leading generator; results merged in input order.
    let leading: Vec<(usize, Generator)> = abasis
        .iter()
        .map(|g| (0usize, *g))
        .chain(bbasis.iter().map(|g| (1usize, *g)))
        .collect();
    let parts: Vec<Result<CheckReport>> = leading
        .par_iter()
        .map(|(kind, first)| {
            let mut rep = CheckReport::new();
            let f = gen(first);
            if *kind == 0 {
                // a∧(y∧z) = (a*_l y)∧z
                for y in &bbasis {
                    for z in &bbasis {
                        let (gy, gz) = (gen(y), gen(z));
                        let lhs = amul(&f, &pair(&gy, &gz)?)?;
                        let rhs = pair(&left(&f, &gy)?, &gz)?;
                        rep.record(lhs == rhs, || {
                            Violation::new("a∧(y∧z) = (a*_l y)∧z", names(&[first, y, z]), &lhs, &rhs)
                        });
                    }
                }
            } else {
                let x = first;
                for y in &bbasis {
                    let gy = gen(y);
                    let xy = pair(&f, &gy)?;
                    // (x∧y)∧a = x∧(y*_r a)
                    for aa in &abasis {
                        let ga = gen(aa);
                        let lhs = amul(&xy, &ga)?;
                        let rhs = pair(&f, &right(&gy, &ga)?)?;
                        rep.record(lhs == rhs, || {
                            Violation::new("(x∧y)∧a = x∧(y*_r a)", names(&[x, y, aa]), &lhs, &rhs)
                        });
                    }
                    // (x∧y)*_l z = x*_r(y∧z)
                    for z in &bbasis {
                        let gz = gen(z);
                        let lhs = left(&xy, &gz)?;
                        let rhs = right(&f, &pair(&gy, &gz)?)?;
                        rep.record(lhs == rhs, || {
                            Violation::new("(x∧y)*_l z = x*_r(y∧z)", names(&[x, y, z]), &lhs, &rhs)
                        });
                    }
                }
                // (x*_r a)∧z = x∧(a*_l z)
                for aa in &abasis {
                    let ga = gen(aa);
                    let xa = right(&f, &ga)?;
                    for z in &bbasis {
                        let gz = gen(z);
                        let lhs = pair(&xa, &gz)?;
                        let rhs = pair(&f, &left(&ga, &gz)?)?;
                        rep.record(lhs == rhs, || {
                            Violation::new("(x*_r a)∧z = x∧(a*_l z)", names(&[x, aa, z]), &lhs, &rhs)
                        });
                    }
                }
            }
            Ok(rep)
        })
        .collect();
    let mut report = CheckReport::new();
    for p in parts {
        report.merge(p?);
    }
    Ok(report)
}

/// (xy)z = x(yz) on all basis triples with index ≤ cutoff.
pub fn check_associativity(alg: &dyn AlgebraSpec, cutoff: i64) -> Result<CheckReport> {
    let ring = alg.ring();
    let basis = alg.basis(cutoff);
    let parts: Vec<Result<CheckReport>> = basis
        .par_iter()
        .map(|x| {
            let mut rep = CheckReport::new();
            let gx = GradedElement::generator(ring, *x);
            for y in &basis {
                let gy = GradedElement::generator(ring, *y);
                let xy = alg.mul_gen(x, y)?;
                for z in &basis {
                    let gz = GradedElement::generator(ring, *z);
                    let lhs = alg.multiply(&xy, &gz)?;
                    let rhs = alg.multiply(&gx, &alg.multiply(&gy, &gz)?)?;
                    rep.record(lhs == rhs, || Violation::new("(xy)z = x(yz)", names(&[x, y, z]), &lhs, &rhs));
                }
            }
            Ok(rep)
        })
        .collect();
    let mut report = CheckReport::new();
    for p in parts {
        report.merge(p?);
    }
    Ok(report)
}

/// The unit is a two-sided identity on every basis generator.
pub fn check_unit(alg: &dyn AlgebraSpec, cutoff: i64) -> Result<CheckReport> {
    let ring = alg.ring();
    let u = alg.unit();
    let mut rep = CheckReport::new();
    for g in alg.basis(cutoff) {
        let e = GradedElement::generator(ring, g);
        let l = alg.mul_gen(&u, &g)?;
        let r = alg.mul_gen(&g, &u)?;
        rep.record(l == e, || Violation::new("1·x = x", names(&[&g]), &l, &e));
        rep.record(r == e, || Violation::new("x·1 = x", names(&[&g]), &r, &e));
    }
    Ok(rep)
}

/// Module associativity of both actions and their compatibility.
pub fn check_bimodule(a: &dyn AlgebraSpec, b: &dyn BimoduleSpec, cutoff: i64) -> Result<CheckReport> {
    let ring = a.ring();
    let abasis = a.basis(cutoff);
    let bbasis = b.module_basis(cutoff);
    let left = |x: &GradedElement, y: &GradedElement| bilinear(ring, x, y, |s, t| b.left_action(s, t));
    let right = |x: &GradedElement, y: &GradedElement| bilinear(ring, x, y, |s, t| b.right_action(s, t));
    let gen = |g: &Generator| GradedElement::generator(ring, *g);
    let mut rep = CheckReport::new();
    for p in &abasis {
        for q in &abasis {
            let pq = a.mul_gen(p, q)?;
            for x in &bbasis {
                let (gp, gq, gx) = (gen(p), gen(q), gen(x));
                let lhs = left(&pq, &gx)?;
                let rhs = left(&gp, &left(&gq, &gx)?)?;
                rep.record(lhs == rhs, || Violation::new("(ab)*_l x = a*_l(b*_l x)", names(&[p, q, x]), &lhs, &rhs));
                let lhs = right(&right(&gx, &gp)?, &gq)?;
                let rhs = right(&gx, &pq)?;
                rep.record(lhs == rhs, || Violation::new("(x*_r a)*_r b = x*_r(ab)", names(&[x, p, q]), &lhs, &rhs));
                let lhs = right(&left(&gp, &gx)?, &gq)?;
                let rhs = left(&gp, &right(&gx, &gq)?)?;
                rep.record(lhs == rhs, || Violation::new("(a*_l x)*_r b = a*_l(x*_r b)", names(&[p, x, q]), &lhs, &rhs));
            }
        }
    }
    Ok(rep)
}

/// Default coefficient bound for [`find_degree0_involutions`].
pub const INVOLUTION_COEFF_BOUND: i64 = 2;

/// Elements c of the same degree as the unit with c² = 1 and c ≠ ±1, found
/// by exhaustive search over coefficient vectors in {−2..2}.
pub fn find_degree0_involutions(alg: &dyn AlgebraSpec, cutoff: i64) -> Result<Vec<GradedElement>> {
    find_degree0_involutions_with_bound(alg, cutoff, INVOLUTION_COEFF_BOUND)
}

/// As [`find_degree0_involutions`] with coefficients in {−bound..bound}.
/// This is a semidecision: absence is only certified within the box.
pub fn find_degree0_involutions_with_bound(
    alg: &dyn AlgebraSpec,
    cutoff: i64,
    bound: i64,
) -> Result<Vec<GradedElement>> {
    let ring = alg.ring();
    let unit = alg.unit();
    let d0 = unit.degree();
    let gens: Vec<Generator> = alg.basis(cutoff).into_iter().filter(|g| g.degree() == d0).collect();
    let dim = gens.len();
    let width = (2 * bound + 1) as f64;
    if width.powi(dim as i32) > 5e8 {
        return Err(Error::InvalidArgument(format!(
            "search space {}^{} too large; lower the cutoff or bound",
            2 * bound + 1,
            dim
        )));
    }

    // Product table over a dense set of result slots, small integers only.
    let mut slots: BTreeMap<Generator, usize> = BTreeMap::new();
    let mut table: Vec<Vec<(usize, i64)>> = Vec::with_capacity(dim * dim);
    for x in &gens {
        for y in &gens {
            let p = alg.mul_gen(x, y)?;
            let mut entry = Vec::new();
            for (g, k) in p.terms() {
                let next = slots.len();
                let s = *slots.entry(*g).or_insert(next);
                let k = if k.is_integer() { k.to_integer().to_i64() } else { None }
                    .ok_or_else(|| Error::Unsupported(format!("non-integral structure constant {}", k)))?;
                entry.push((s, k));
            }
            table.push(entry);
        }
    }
    let unit_slot = slots.get(&unit).copied();
    let reduce = |v: i64| if ring == CoefficientRing::FieldOfTwoElements { v.rem_euclid(2) } else { v };
    let unit_pos = gens.iter().position(|g| *g == unit);

    let mut coeffs = vec![-bound; dim];
    let mut acc = vec![0i64; slots.len()];
    let mut found = Vec::new();
    if dim == 0 {
        return Ok(found);
    }
    loop {
        acc.iter_mut().for_each(|v| *v = 0);
        for i in 0..dim {
            let ci = coeffs[i];
            if ci == 0 {
                continue;
            }
            for j in 0..dim {
                let cj = coeffs[j];
                if cj == 0 {
                    continue;
                }
                for &(s, k) in &table[i * dim + j] {
                    acc[s] += ci * cj * k;
                }
            }
        }
        let is_one = acc.iter().enumerate().all(|(s, v)| {
            let want = if Some(s) == unit_slot { 1 } else { 0 };
            reduce(*v) == reduce(want)
        });
        if is_one {
            let trivial = match unit_pos {
                Some(u) => coeffs.iter().enumerate().all(|(i, v)| if i == u { v.abs() == 1 } else { *v == 0 }),
                None => false,
            };
            let reduced_trivial = ring == CoefficientRing::FieldOfTwoElements
                && coeffs.iter().enumerate().all(|(i, v)| {
                    if Some(i) == unit_pos {
                        v.rem_euclid(2) == 1
                    } else {
                        v.rem_euclid(2) == 0
                    }
                });
            if !trivial && !reduced_trivial {
                let e = GradedElement::from_terms(ring, gens.iter().zip(&coeffs).map(|(g, k)| (*g, c(*k))))?;
                if !e.is_zero() && !found.contains(&e) {
                    found.push(e);
                }
            }
        }
        // odometer
        let mut i = 0;
        loop {
            if i == dim {
                return Ok(found);
            }
            coeffs[i] += 1;
            if coeffs[i] > bound {
                coeffs[i] = -bound;
                i += 1;
            } else {
                break;
            }
        }
    }
}
