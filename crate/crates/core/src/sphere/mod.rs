//! Concrete extended loop-product tables on Sⁿ for the three computable
//! regimes: the circle, n ≡ 3 mod 4, and n even.

mod presentation;

pub use presentation::{monomial_isomorphism, verify_presentation, Letter, Word};

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::element::GradedElement;
use crate::error::{Error, Result};
use crate::extension::{bilinear, build_extension, AlgebraSpec, BimoduleSpec, Extension, PairingSpec};
use crate::generator::{Family, Generator, HalfIndex, Space};
use crate::report::{CheckReport, Violation};
use crate::ring::CoefficientRing;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Regime {
    Circle,
    OddWithTwoFields,
    Even,
}

impl Regime {
    pub fn for_dimension(n: u32) -> Result<Regime> {
        match n {
            0 => Err(Error::UnsupportedDimension(0, "need n ≥ 1".into())),
            1 => Ok(Regime::Circle),
            n if n % 2 == 0 => Ok(Regime::Even),
            n if n % 4 == 3 => Ok(Regime::OddWithTwoFields),
            n => Err(Error::UnsupportedDimension(
                n,
                "n ≡ 1 mod 4 with n ≥ 5 is an open case: the extension is not known to be trivial there".into(),
            )),
        }
    }

    pub fn default_ring(self) -> CoefficientRing {
        match self {
            Regime::Even => CoefficientRing::Rationals,
            _ => CoefficientRing::Integers,
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Circle => "circle",
            Regime::OddWithTwoFields => "odd (n ≡ 3 mod 4)",
            Regime::Even => "even",
        })
    }
}

/// The full rule set for one (n, ring) regime. The table acts as the loop
/// algebra, the bimodule and the pairing at once.
#[derive(Debug, Clone)]
pub struct SphereAlgebraTable {
    pub n: u32,
    pub regime: Regime,
    pub ring: CoefficientRing,
    /// Action of the antipodal map on loop-space generators, used only by
    /// [`module_commutation_status`]. `None` means the identity.
    pub loop_involution: Option<BTreeMap<Generator, GradedElement>>,
}

impl SphereAlgebraTable {
    pub fn new(n: u32) -> Result<Self> {
        let regime = Regime::for_dimension(n)?;
        Self::with_ring(n, regime.default_ring())
    }

    pub fn with_ring(n: u32, ring: CoefficientRing) -> Result<Self> {
        let regime = Regime::for_dimension(n)?;
        if regime == Regime::Even && ring != CoefficientRing::Rationals {
            return Err(Error::Unsupported(format!(
                "even spheres are tabulated over Q only (got {}): the torsion in H(US^n) is not modelled",
                ring
            )));
        }
        Ok(SphereAlgebraTable { n, regime, ring, loop_involution: None })
    }

    /// deg(a) = (−1)^{n+1}, the degree of the antipodal map.
    pub fn antipodal_degree(&self) -> i64 {
        if self.n % 2 == 1 {
            1
        } else {
            -1
        }
    }

    pub fn fund(&self) -> Generator {
        match self.regime {
            Regime::Circle => Generator::circle(Family::BigGammaPrime, 0),
            _ => Generator::fund(self.n),
        }
    }

    /// The point class of the constant loops.
    pub fn pt(&self) -> Generator {
        match self.regime {
            Regime::Circle => Generator::circle(Family::GammaPrime, 0),
            Regime::OddWithTwoFields => Generator::a_prime(0, self.n),
            Regime::Even => Generator::pt(self.n),
        }
    }

    /// Parse a generator name and resolve regime aliases (`pt`, `fund`).
    pub fn parse_generator(&self, s: &str) -> Result<Generator> {
        let g = Generator::parse(s, self.n)?;
        let g = match g.family {
            Family::Pt => self.pt(),
            Family::Fund => self.fund(),
            _ => g,
        };
        self.validate(&g)?;
        Ok(g)
    }

    /// Parse `2*A[0] - B'[1] + pt`.
    pub fn parse_element(&self, s: &str) -> Result<GradedElement> {
        let mut out = GradedElement::zero(self.ring);
        let normalized = s.replace(" - ", " + -").replace("- ", "-");
        for raw in normalized.split(" + ") {
            let t = raw.trim();
            if t.is_empty() || t == "0" {
                continue;
            }
            let (coeff, name) = match t.split_once('*') {
                Some((k, g)) => (crate::ring::parse_coeff(k)?, g),
                None => match t.strip_prefix('-') {
                    Some(rest) => (crate::ring::c(-1), rest),
                    None => (crate::ring::c(1), t),
                },
            };
            out.add_term(self.parse_generator(name)?, coeff)?;
        }
        Ok(out)
    }

    pub fn validate(&self, g: &Generator) -> Result<()> {
        let bad = |why: &str| Err(Error::IllegalGenerator(*g, why.into()));
        if g.n != self.n {
            return bad(&format!("belongs to n = {}, table has n = {}", g.n, self.n));
        }
        if g.space != g.family.space() {
            return bad("space tag does not match family");
        }
        let idx = g.index;
        match self.regime {
            Regime::Even => match g.family {
                Family::A | Family::B => {
                    if !idx.is_integer() || idx.value() < 0 || idx.value() % 2 != 0 {
                        return bad("A_k, B_k need even k ≥ 0 for even n");
                    }
                }
                Family::APrime | Family::BPrime => {
                    if !idx.is_integer() || idx.value() < 1 || idx.value() % 2 != 1 {
                        return bad("A′_k, B′_k need odd k ≥ 1 for even n");
                    }
                }
                Family::Pt | Family::Fund => {}
                _ => return bad("family not used for even spheres"),
            },
            Regime::OddWithTwoFields => match g.family {
                Family::A | Family::B | Family::APrime | Family::BPrime => {
                    if !idx.is_integer() || idx.value() < 0 {
                        return bad("index must be an integer ≥ 0");
                    }
                }
                Family::Fund | Family::E => {}
                _ => return bad("family not used for n ≡ 3 mod 4"),
            },
            Regime::Circle => match g.family {
                Family::Gamma | Family::BigGamma => {
                    if idx.is_integer() {
                        return bad("path classes of the circle have index in Z + 1/2");
                    }
                }
                Family::GammaPrime | Family::BigGammaPrime => {
                    if !idx.is_integer() {
                        return bad("loop classes of the circle have integer index");
                    }
                }
                _ => return bad("family not used for the circle"),
            },
        }
        Ok(())
    }

    fn out(&self, sign: i64, g: Generator) -> GradedElement {
        GradedElement::signed(self.ring, sign, g)
    }

    fn zero(&self) -> GradedElement {
        GradedElement::zero(self.ring)
    }

    /// Generator-level extended product: dispatches on the space tags.
    pub fn product_gen(&self, x: &Generator, y: &Generator) -> Result<GradedElement> {
        self.validate(x)?;
        self.validate(y)?;
        match self.regime {
            Regime::Circle => Ok(self.circle_rule(x, y)),
            Regime::OddWithTwoFields => self.odd_rule(x, y),
            Regime::Even => Ok(self.even_rule(x, y)),
        }
    }

    /// Circle: γ·γ = 0, γ_k·Γ_l = Γ_k·γ_l = γ_{k+l}, Γ_k·Γ_l = Γ_{k+l};
    /// the product lands in the loop space iff k+l is an integer.
    fn circle_rule(&self, x: &Generator, y: &Generator) -> GradedElement {
        let small = |g: &Generator| matches!(g.family, Family::Gamma | Family::GammaPrime);
        let idx = x.index + y.index;
        let family = match (small(x), small(y), idx.is_integer()) {
            (true, true, _) => return self.zero(),
            (true, false, true) | (false, true, true) => Family::GammaPrime,
            (true, false, false) | (false, true, false) => Family::Gamma,
            (false, false, true) => Family::BigGammaPrime,
            (false, false, false) => Family::BigGamma,
        };
        self.out(1, Generator::new(family, idx, 1))
    }

    /// The loop ring ℤ[A,U]/(A²) for n ≡ 3 mod 4 in the basis
    /// fund = 1, A′_k = AU^k, B′_k = U^{k+1}.
    fn odd_loop_rule(&self, x: &Generator, y: &Generator) -> GradedElement {
        let n = self.n;
        let k = |g: &Generator| g.index.value();
        match (x.family, y.family) {
            (Family::Fund, _) => self.out(1, *y),
            (_, Family::Fund) => self.out(1, *x),
            (Family::APrime, Family::APrime) => self.zero(),
            (Family::APrime, Family::BPrime) | (Family::BPrime, Family::APrime) => {
                self.out(1, Generator::a_prime(k(x) + k(y) + 1, n))
            }
            (Family::BPrime, Family::BPrime) => self.out(1, Generator::b_prime(k(x) + k(y) + 1, n)),
            _ => unreachable!("validated loop generators"),
        }
    }

    /// n ≡ 3 mod 4 is the trivial extension of the loop ring: the path
    /// summand is a second copy reached through the A′↔A, B′↔B, fund↔E twin.
    fn odd_rule(&self, x: &Generator, y: &Generator) -> Result<GradedElement> {
        let untwin = |g: &Generator| -> Generator {
            if g.space == Space::AntipodalPathSpace {
                g.twin().expect("path generators have twins")
            } else {
                *g
            }
        };
        let p = self.odd_loop_rule(&untwin(x), &untwin(y));
        let into_path = (x.space == Space::AntipodalPathSpace) != (y.space == Space::AntipodalPathSpace);
        if !into_path {
            return Ok(p);
        }
        let mut out = self.zero();
        for (g, k) in p.terms() {
            out.add_term(g.twin().expect("loop generators have twins"), k.clone())?;
        }
        Ok(out)
    }

    /// Even n over ℚ. Path × path (∧_a), the two module actions and the
    /// loop ring, with fund the unit and pt annihilating everything else.
    fn even_rule(&self, x: &Generator, y: &Generator) -> GradedElement {
        use Family::*;
        let n = self.n;
        let k = |g: &Generator| g.index.value();
        let s = k(x) + k(y) + 1;
        match (x.family, y.family) {
            (Fund, _) => self.out(1, *y),
            (_, Fund) => self.out(1, *x),
            (Pt, _) | (_, Pt) => self.zero(),
            // ∧_a
            (A, A) => self.zero(),
            (A, B) => self.out(1, Generator::a_prime(s, n)),
            (B, A) => self.out(-1, Generator::a_prime(s, n)),
            (B, B) => self.out(1, Generator::b_prime(s, n)),
            // *_l
            (APrime, A) => self.zero(),
            (APrime, B) | (BPrime, A) => self.out(1, Generator::a(s, n)),
            (BPrime, B) => self.out(1, Generator::b(s, n)),
            // *_r
            (A, APrime) => self.zero(),
            (A, BPrime) => self.out(1, Generator::a(s, n)),
            (B, APrime) => self.out(-1, Generator::a(s, n)),
            (B, BPrime) => self.out(1, Generator::b(s, n)),
            // Chas-Sullivan ring on the non-constant loops
            (APrime, APrime) => self.zero(),
            (APrime, BPrime) | (BPrime, APrime) => self.out(1, Generator::a_prime(s, n)),
            (BPrime, BPrime) => self.out(1, Generator::b_prime(s, n)),
            _ => unreachable!("validated even-sphere generators"),
        }
    }

    pub fn loop_basis(&self, cutoff: i64) -> Vec<Generator> {
        let n = self.n;
        let mut v = Vec::new();
        match self.regime {
            Regime::Even => {
                v.push(Generator::pt(n));
                v.push(Generator::fund(n));
                for k in (1..=cutoff).step_by(2) {
                    v.push(Generator::a_prime(k, n));
                    v.push(Generator::b_prime(k, n));
                }
            }
            Regime::OddWithTwoFields => {
                v.push(Generator::fund(n));
                for k in 0..=cutoff {
                    v.push(Generator::a_prime(k, n));
                    v.push(Generator::b_prime(k, n));
                }
            }
            Regime::Circle => {
                for k in -cutoff..=cutoff {
                    v.push(Generator::circle(Family::GammaPrime, 2 * k));
                    v.push(Generator::circle(Family::BigGammaPrime, 2 * k));
                }
            }
        }
        v.sort();
        v
    }

    pub fn path_basis(&self, cutoff: i64) -> Vec<Generator> {
        let n = self.n;
        let mut v = Vec::new();
        match self.regime {
            Regime::Even => {
                for k in (0..=cutoff).step_by(2) {
                    v.push(Generator::a(k, n));
                    v.push(Generator::b(k, n));
                }
            }
            Regime::OddWithTwoFields => {
                v.push(Generator::e(n));
                for k in 0..=cutoff {
                    v.push(Generator::a(k, n));
                    v.push(Generator::b(k, n));
                }
            }
            Regime::Circle => {
                // half-integers j/2 with |j/2| ≤ cutoff
                for j in (-2 * cutoff + 1..=2 * cutoff - 1).step_by(2) {
                    v.push(Generator::circle(Family::Gamma, j));
                    v.push(Generator::circle(Family::BigGamma, j));
                }
            }
        }
        v.sort();
        v
    }

    /// All generators (both summands) with index ≤ cutoff.
    pub fn basis_all(&self, cutoff: i64) -> Vec<Generator> {
        let mut v = self.loop_basis(cutoff);
        v.extend(self.path_basis(cutoff));
        v.sort();
        v
    }

    /// The extension algebra H(ΛSⁿ) ⊕ H(P_aSⁿ).
    pub fn extended(&self) -> Extension<'_> {
        build_extension(self, self, self)
    }

    fn check_space(&self, g: &Generator, space: Space) -> Result<()> {
        self.validate(g)?;
        if g.space != space {
            return Err(Error::IllegalGenerator(*g, format!("expected a {:?} generator", space)));
        }
        Ok(())
    }
}

impl AlgebraSpec for SphereAlgebraTable {
    fn ring(&self) -> CoefficientRing {
        self.ring
    }
    fn unit(&self) -> Generator {
        self.fund()
    }
    fn mul_gen(&self, x: &Generator, y: &Generator) -> Result<GradedElement> {
        self.check_space(x, Space::LoopSpace)?;
        self.check_space(y, Space::LoopSpace)?;
        self.product_gen(x, y)
    }
    fn basis(&self, cutoff: i64) -> Vec<Generator> {
        self.loop_basis(cutoff)
    }
}

impl BimoduleSpec for SphereAlgebraTable {
    fn left_action(&self, a: &Generator, x: &Generator) -> Result<GradedElement> {
        self.check_space(a, Space::LoopSpace)?;
        self.check_space(x, Space::AntipodalPathSpace)?;
        self.product_gen(a, x)
    }
    fn right_action(&self, x: &Generator, a: &Generator) -> Result<GradedElement> {
        self.check_space(x, Space::AntipodalPathSpace)?;
        self.check_space(a, Space::LoopSpace)?;
        self.product_gen(x, a)
    }
    fn module_basis(&self, cutoff: i64) -> Vec<Generator> {
        self.path_basis(cutoff)
    }
}

impl PairingSpec for SphereAlgebraTable {
    fn pair(&self, x: &Generator, y: &Generator) -> Result<GradedElement> {
        self.check_space(x, Space::AntipodalPathSpace)?;
        self.check_space(y, Space::AntipodalPathSpace)?;
        self.product_gen(x, y)
    }
}

/// The extended product of two elements.
pub fn extended_product(t: &SphereAlgebraTable, x: &GradedElement, y: &GradedElement) -> Result<GradedElement> {
    bilinear(t.ring, x, y, |a, b| t.product_gen(a, b))
}

fn koszul(a: i64, b: i64) -> i64 {
    if (a * b).rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// X ∧_a Y = deg(a)(−1)^{(|X|−n)(|Y|−n)} Y ∧_a X for two path generators.
pub fn sign_commutator_check(t: &SphereAlgebraTable, x: &Generator, y: &Generator) -> Result<bool> {
    t.check_space(x, Space::AntipodalPathSpace)?;
    t.check_space(y, Space::AntipodalPathSpace)?;
    let n = t.n as i64;
    let lhs = t.product_gen(x, y)?;
    let sign = t.antipodal_degree() * koszul(x.degree() - n, y.degree() - n);
    let rhs = t.product_gen(y, x)?.scale(&crate::ring::c(sign))?;
    Ok(lhs == rhs)
}

/// Signed commutation over all path pairs up to `cutoff`.
pub fn sign_commutator_report(t: &SphereAlgebraTable, cutoff: i64) -> Result<CheckReport> {
    let mut rep = CheckReport::new();
    let basis = t.path_basis(cutoff);
    for x in &basis {
        for y in &basis {
            let ok = sign_commutator_check(t, x, y)?;
            rep.record(ok, || {
                Violation::new(
                    "X∧Y = deg(a)(−1)^{(|X|−n)(|Y|−n)} Y∧X",
                    vec![x.to_string(), y.to_string()],
                    t.product_gen(x, y).map(|e| e.to_string()).unwrap_or_default(),
                    t.product_gen(y, x).map(|e| e.to_string()).unwrap_or_default(),
                )
            });
        }
    }
    Ok(rep)
}

/// |X·Y| = |X| + |Y| − n for every term of every generator product.
pub fn degree_law_report(t: &SphereAlgebraTable, cutoff: i64) -> Result<CheckReport> {
    let mut rep = CheckReport::new();
    let basis = t.basis_all(cutoff);
    let n = t.n as i64;
    for x in &basis {
        for y in &basis {
            let want = x.degree() + y.degree() - n;
            for (z, _) in t.product_gen(x, y)?.terms() {
                rep.record(z.degree() == want, || {
                    Violation::new("|X·Y| = |X| + |Y| − n", vec![x.to_string(), y.to_string()], z.degree(), want)
                });
            }
        }
    }
    Ok(rep)
}

/// Compare X *_l A with deg(a)(−1)^{(|X|−n)(|A|−n)} A *_r φ(X) where φ is
/// the configured loop involution (identity by default). The full
/// statement needs the true action of the antipodal map on H(ΛSⁿ), which is
/// not tabulated; the result is informational.
pub fn module_commutation_status(t: &SphereAlgebraTable, cutoff: i64) -> Result<CheckReport> {
    let n = t.n as i64;
    let mut rep = CheckReport::new();
    for x in t.loop_basis(cutoff) {
        let phi_x = match &t.loop_involution {
            Some(map) => map.get(&x).cloned().unwrap_or_else(|| GradedElement::generator(t.ring, x)),
            None => GradedElement::generator(t.ring, x),
        };
        for a in t.path_basis(cutoff) {
            let lhs = t.product_gen(&x, &a)?;
            let ga = GradedElement::generator(t.ring, a);
            let sign = t.antipodal_degree() * koszul(x.degree() - n, a.degree() - n);
            let rhs = extended_product(t, &ga, &phi_x)?.scale(&crate::ring::c(sign))?;
            rep.record(lhs == rhs, || {
                Violation::new("X*_l A = ±A*_r (Λa)_*X", vec![x.to_string(), a.to_string()], &lhs, &rhs)
            });
        }
    }
    if t.loop_involution.is_none() {
        rep.notes.push("(Λa)_* taken to be the identity; mismatches are expected where it is not".into());
    }
    Ok(rep)
}

/// Helper used by the presentation check and tests.
pub(crate) fn circle_gen(family: Family, twice: i64) -> Generator {
    Generator::new(family, HalfIndex(twice), 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q2() -> SphereAlgebraTable {
        SphereAlgebraTable::new(2).unwrap()
    }

    #[test]
    fn regime_selection() {
        assert_eq!(Regime::for_dimension(1).unwrap(), Regime::Circle);
        assert_eq!(Regime::for_dimension(3).unwrap(), Regime::OddWithTwoFields);
        assert_eq!(Regime::for_dimension(7).unwrap(), Regime::OddWithTwoFields);
        assert_eq!(Regime::for_dimension(6).unwrap(), Regime::Even);
        assert!(matches!(Regime::for_dimension(5), Err(Error::UnsupportedDimension(5, _))));
        assert!(SphereAlgebraTable::with_ring(2, CoefficientRing::Integers).is_err());
    }

    #[test]
    fn even_examples() {
        let t = q2();
        let r = t.product_gen(&Generator::b(0, 2), &Generator::a(0, 2)).unwrap();
        assert_eq!(r.to_string(), "-A'[1]");
        let r = t.product_gen(&Generator::fund(2), &Generator::b(2, 2)).unwrap();
        assert_eq!(r.to_string(), "B[2]");
        assert!(t.product_gen(&Generator::pt(2), &Generator::b(2, 2)).unwrap().is_zero());
    }

    #[test]
    fn circle_example() {
        let t = SphereAlgebraTable::new(1).unwrap();
        let r = t
            .product_gen(&circle_gen(Family::Gamma, 1), &circle_gen(Family::BigGamma, -1))
            .unwrap();
        assert_eq!(r.to_string(), "g'[0]");
    }

    #[test]
    fn odd_example() {
        let t = SphereAlgebraTable::new(3).unwrap();
        let r = t.product_gen(&Generator::e(3), &Generator::e(3)).unwrap();
        assert_eq!(r, GradedElement::generator(t.ring, t.fund()));
    }

    #[test]
    fn illegal_generators() {
        let t = q2();
        assert!(t.product_gen(&Generator::a(1, 2), &Generator::a(0, 2)).is_err());
        assert!(t.product_gen(&Generator::a_prime(2, 2), &Generator::a(0, 2)).is_err());
        assert!(t.parse_generator("E").is_err());
        let c = SphereAlgebraTable::new(1).unwrap();
        assert!(c.parse_generator("g[1]").is_err());
        assert_eq!(c.parse_generator("pt").unwrap().to_string(), "g'[0]");
    }

    #[test]
    fn sign_commutator_examples() {
        let t = q2();
        assert!(sign_commutator_check(&t, &Generator::a(0, 2), &Generator::b(0, 2)).unwrap());
        assert!(sign_commutator_check(&t, &Generator::b(0, 2), &Generator::b(2, 2)).unwrap());
        let c = SphereAlgebraTable::new(1).unwrap();
        assert_eq!(c.antipodal_degree(), 1);
        assert!(sign_commutator_check(&c, &circle_gen(Family::Gamma, 1), &circle_gen(Family::BigGamma, 1)).unwrap());
    }

    #[test]
    fn parse_element_round_trip() {
        let t = q2();
        let e = t.parse_element("2*A[0] - B'[1] + pt").unwrap();
        assert_eq!(e.to_string(), "-B'[1] + pt + 2*A[0]");
    }
}
