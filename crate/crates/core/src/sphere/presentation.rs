//! Presentations of the extended algebras by generators and relations, and
//! an independent normal-form evaluator used to cross-check the tables.

use std::collections::HashMap;
use std::fmt;

use super::{circle_gen, Regime, SphereAlgebraTable};
use crate::element::GradedElement;
use crate::error::{Error, Result};
use crate::generator::{Family, Generator, Space};
use crate::report::{CheckReport, Violation};
use crate::ring::c;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    A,
    B,
    U,
    E,
    V,
    /// exterior generator a of the circle algebra
    Ext,
    T,
    TInv,
}

impl Letter {
    fn name(self) -> &'static str {
        match self {
            Letter::A => "A",
            Letter::B => "B",
            Letter::U => "U",
            Letter::E => "E",
            Letter::V => "V",
            Letter::Ext => "a",
            Letter::T => "t",
            Letter::TInv => "t^-1",
        }
    }
}

/// A signed monomial in the presentation generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    pub sign: i64,
    pub letters: Vec<Letter>,
}

impl Word {
    fn new(letters: Vec<Letter>) -> Self {
        Word { sign: 1, letters }
    }

    fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { sign: self.sign * other.sign, letters }
    }
}

fn power(l: Letter, k: usize) -> Vec<Letter> {
    vec![l; k]
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign < 0 {
            f.write_str("-")?;
        }
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.letters.len() {
            let l = self.letters[i];
            let mut j = i;
            while j < self.letters.len() && self.letters[j] == l {
                j += 1;
            }
            let k = j - i;
            parts.push(if k == 1 {
                l.name().to_string()
            } else if l == Letter::TInv {
                format!("t^-{}", k)
            } else {
                format!("{}^{}", l.name(), k)
            });
            i = j;
        }
        f.write_str(&parts.join("*"))
    }
}

/// The monomial corresponding to a basis generator.
///
/// Even n: A_k, A′_k ↦ A·U^k; B_k, B′_k ↦ U^{k+1}; pt ↦ B; fund ↦ 1.
/// n ≡ 3 mod 4: A′_k ↦ A·U^k, B′_k ↦ U^{k+1}, fund ↦ 1, E ↦ E,
/// A_k ↦ B·U^k, B_k ↦ V·U^k.
pub fn monomial_isomorphism(t: &SphereAlgebraTable, g: &Generator) -> Result<Word> {
    t.validate(g)?;
    let k = || g.index.value() as usize;
    use Letter::*;
    let letters = match (t.regime, g.family) {
        (Regime::Circle, _) => {
            return Err(Error::Unsupported(
                "the circle algebra is checked against Λ[a]⊗Z[t,t⁻¹] directly, not by a monomial map".into(),
            ))
        }
        (_, Family::A | Family::APrime) if t.regime == Regime::Even || g.family == Family::APrime => {
            let mut w = vec![A];
            w.extend(power(U, k()));
            w
        }
        (_, Family::B | Family::BPrime) if t.regime == Regime::Even || g.family == Family::BPrime => {
            power(U, k() + 1)
        }
        (Regime::Even, Family::Pt) => vec![B],
        (_, Family::Fund) => vec![],
        (Regime::OddWithTwoFields, Family::E) => vec![E],
        (Regime::OddWithTwoFields, Family::A) => {
            let mut w = vec![B];
            w.extend(power(U, k()));
            w
        }
        (Regime::OddWithTwoFields, Family::B) => {
            let mut w = vec![V];
            w.extend(power(U, k()));
            w
        }
        _ => return Err(Error::IllegalGenerator(*g, "no monomial".into())),
    };
    Ok(Word::new(letters))
}

/// Λ[a] ⊗ ℤ[t, t⁻¹] monomial of a circle generator: Γ_k ↦ t^{2k},
/// γ_k ↦ a·t^{2k}.
fn circle_word(g: &Generator) -> Word {
    let j = g.index.twice();
    let mut letters = Vec::new();
    if matches!(g.family, Family::Gamma | Family::GammaPrime) {
        letters.push(Letter::Ext);
    }
    let l = if j >= 0 { Letter::T } else { Letter::TInv };
    letters.extend(power(l, j.unsigned_abs() as usize));
    Word::new(letters)
}

fn word_of(t: &SphereAlgebraTable, g: &Generator) -> Result<Word> {
    match t.regime {
        Regime::Circle => Ok(circle_word(g)),
        _ => monomial_isomorphism(t, g),
    }
}

/// Normal form computed from the defining relations alone (never from the
/// tables). `None` means the word is zero in the presented algebra.
fn normal_form(regime: Regime, w: &Word) -> Option<Word> {
    use Letter::*;
    match regime {
        // ℚ⟨A,B,U⟩/(A², AU+UA, B², BA, AB, BU, UB)
        Regime::Even => {
            if w.letters.contains(&B) {
                return if w.letters == [B] { Some(w.clone()) } else { None };
            }
            let mut sign = w.sign;
            let mut us_seen = 0usize;
            let mut a_count = 0;
            for l in &w.letters {
                match l {
                    A => {
                        a_count += 1;
                        // move this A to the front past the U's before it
                        if us_seen % 2 == 1 {
                            sign = -sign;
                        }
                    }
                    U => us_seen += 1,
                    _ => unreachable!("letter outside the even presentation"),
                }
            }
            if a_count > 1 {
                return None;
            }
            let mut letters = if a_count == 1 { vec![A] } else { vec![] };
            letters.extend(power(U, us_seen));
            Some(Word { sign, letters })
        }
        // ℤ[A,U,E,B,V]/(A², B², BV−AU, V²−U², EB−A, EV−U, E²−1):
        // B = EA, V = EU, so this is ℤ[A,U,E]/(A², E²−1).
        Regime::OddWithTwoFields => {
            let (mut e, mut a, mut u) = (0usize, 0usize, 0usize);
            for l in &w.letters {
                match l {
                    A => a += 1,
                    U => u += 1,
                    E => e += 1,
                    B => {
                        e += 1;
                        a += 1
                    }
                    V => {
                        e += 1;
                        u += 1
                    }
                    _ => unreachable!("letter outside the odd presentation"),
                }
            }
            if a > 1 {
                return None;
            }
            let mut letters = power(E, e % 2);
            letters.extend(power(A, a));
            letters.extend(power(U, u));
            Some(Word { sign: w.sign, letters })
        }
        // Λ[a] ⊗ ℤ[t, t⁻¹], a of odd degree, t of degree 0
        Regime::Circle => {
            let (mut a, mut tp) = (0usize, 0i64);
            for l in &w.letters {
                match l {
                    Ext => a += 1,
                    T => tp += 1,
                    TInv => tp -= 1,
                    _ => unreachable!("letter outside the circle presentation"),
                }
            }
            if a > 1 {
                return None;
            }
            let mut letters = power(Ext, a);
            let l = if tp >= 0 { T } else { TInv };
            letters.extend(power(l, tp.unsigned_abs() as usize));
            Some(Word { sign: w.sign, letters })
        }
    }
}

fn letter_image(t: &SphereAlgebraTable, l: Letter) -> Generator {
    let n = t.n;
    match (t.regime, l) {
        (Regime::Even, Letter::A) => Generator::a(0, n),
        (Regime::Even, Letter::B) => Generator::pt(n),
        (Regime::Even, Letter::U) => Generator::b(0, n),
        (Regime::OddWithTwoFields, Letter::A) => Generator::a_prime(0, n),
        (Regime::OddWithTwoFields, Letter::U) => Generator::b_prime(0, n),
        (Regime::OddWithTwoFields, Letter::E) => Generator::e(n),
        (Regime::OddWithTwoFields, Letter::B) => Generator::a(0, n),
        (Regime::OddWithTwoFields, Letter::V) => Generator::b(0, n),
        (Regime::Circle, Letter::Ext) => circle_gen(Family::GammaPrime, 0),
        (Regime::Circle, Letter::T) => circle_gen(Family::BigGamma, 1),
        (Regime::Circle, Letter::TInv) => circle_gen(Family::BigGamma, -1),
        _ => unreachable!("letter {:?} not in the {} presentation", l, t.regime),
    }
}

/// Evaluate a word by iterated table products, starting from the unit.
fn eval_word(t: &SphereAlgebraTable, w: &Word) -> Result<GradedElement> {
    let mut acc = GradedElement::generator(t.ring, t.fund());
    for l in &w.letters {
        let g = GradedElement::generator(t.ring, letter_image(t, *l));
        acc = super::extended_product(t, &acc, &g)?;
    }
    acc.scale(&c(w.sign))
}

fn eval_sum(t: &SphereAlgebraTable, terms: &[(i64, Word)]) -> Result<GradedElement> {
    let mut acc = GradedElement::zero(t.ring);
    for (k, w) in terms {
        acc.add_scaled(&eval_word(t, w)?, &c(*k))?;
    }
    Ok(acc)
}

fn relations(regime: Regime) -> Vec<(&'static str, Vec<(i64, Word)>)> {
    use Letter::*;
    let w = |ls: &[Letter]| Word::new(ls.to_vec());
    match regime {
        Regime::Even => vec![
            ("A²", vec![(1, w(&[A, A]))]),
            ("AU + UA", vec![(1, w(&[A, U])), (1, w(&[U, A]))]),
            ("B²", vec![(1, w(&[B, B]))]),
            ("BA", vec![(1, w(&[B, A]))]),
            ("AB", vec![(1, w(&[A, B]))]),
            ("BU", vec![(1, w(&[B, U]))]),
            ("UB", vec![(1, w(&[U, B]))]),
        ],
        Regime::OddWithTwoFields => vec![
            ("A²", vec![(1, w(&[A, A]))]),
            ("B²", vec![(1, w(&[B, B]))]),
            ("BV − AU", vec![(1, w(&[B, V])), (-1, w(&[A, U]))]),
            ("V² − U²", vec![(1, w(&[V, V])), (-1, w(&[U, U]))]),
            ("EB − A", vec![(1, w(&[E, B])), (-1, w(&[A]))]),
            ("EV − U", vec![(1, w(&[E, V])), (-1, w(&[U]))]),
            ("E² − 1", vec![(1, w(&[E, E])), (-1, w(&[]))]),
            // commutativity of the polynomial presentation
            ("EA − AE", vec![(1, w(&[E, A])), (-1, w(&[A, E]))]),
            ("EU − UE", vec![(1, w(&[E, U])), (-1, w(&[U, E]))]),
            ("AU − UA", vec![(1, w(&[A, U])), (-1, w(&[U, A]))]),
        ],
        Regime::Circle => vec![
            ("a²", vec![(1, w(&[Ext, Ext]))]),
            ("t·t⁻¹ − 1", vec![(1, w(&[T, TInv])), (-1, w(&[]))]),
            ("t⁻¹·t − 1", vec![(1, w(&[TInv, T])), (-1, w(&[]))]),
            ("at − ta", vec![(1, w(&[Ext, T])), (-1, w(&[T, Ext]))]),
            ("at⁻¹ − t⁻¹a", vec![(1, w(&[Ext, TInv])), (-1, w(&[TInv, Ext]))]),
        ],
    }
}

/// Cross-check the generator tables against the presentation: relations,
/// sandwiched relations, monomial bijection, multiplicativity and the
/// subalgebra claims.
pub fn verify_presentation(t: &SphereAlgebraTable, cutoff: i64) -> Result<CheckReport> {
    if cutoff < 2 {
        return Err(Error::InvalidArgument("presentation check needs cutoff ≥ 2".into()));
    }
    let mut rep = CheckReport::new();
    let basis = t.basis_all(cutoff);
    let zero = GradedElement::zero(t.ring);
    let gen = |g: &Generator| GradedElement::generator(t.ring, *g);

    // Lookup from normal forms to generators over a range that covers all
    // products of two basis elements.
    let wide = t.basis_all(2 * cutoff + 2);
    let mut lookup: HashMap<Vec<Letter>, (i64, Generator)> = HashMap::new();
    for g in &wide {
        let w = word_of(t, g)?;
        let nf = normal_form(t.regime, &w).ok_or_else(|| {
            Error::Unsupported(format!("monomial of {} is zero in the presentation", g))
        })?;
        let prev = lookup.insert(nf.letters.clone(), (nf.sign, *g));
        rep.record(prev.is_none(), || {
            Violation::new("monomial map injective", vec![g.to_string()], &nf, prev.map(|p| p.1.to_string()).unwrap_or_default())
        });
    }
    let from_normal = |w: &Word| -> Result<GradedElement> {
        match normal_form(t.regime, w) {
            None => Ok(GradedElement::zero(t.ring)),
            Some(nf) => match lookup.get(&nf.letters) {
                Some((s, g)) => Ok(GradedElement::signed(t.ring, nf.sign * s, *g)),
                None => Err(Error::Unsupported(format!("normal monomial {} outside the tabulated range", nf))),
            },
        }
    };

    // 1. every basis generator is the table-evaluation of its monomial
    for g in &basis {
        let w = word_of(t, g)?;
        let v = eval_word(t, &w)?;
        rep.record(v == gen(g), || Violation::new("table(word(g)) = g", vec![g.to_string()], &v, g));
    }

    // 2. relations, bare and sandwiched between basis monomials
    for (name, rel) in relations(t.regime) {
        let v = eval_sum(t, &rel)?;
        rep.record(v == zero, || Violation::new(format!("relation {}", name), vec![], &v, "0"));
        for l in &basis {
            let wl = word_of(t, l)?;
            for r in &basis {
                let wr = word_of(t, r)?;
                let sandwiched: Vec<(i64, Word)> =
                    rel.iter().map(|(k, w)| (*k, wl.concat(w).concat(&wr))).collect();
                let v = eval_sum(t, &sandwiched)?;
                rep.record(v == zero, || {
                    Violation::new(format!("relation {} sandwiched", name), vec![l.to_string(), r.to_string()], &v, "0")
                });
            }
        }
    }

    // 3. every normal monomial up to the power cutoff is hit
    for w in normal_monomials(t.regime, cutoff) {
        let hit = lookup.contains_key(&w.letters);
        rep.record(hit, || Violation::new("monomial map surjective", vec![], &w, "no generator"));
    }

    // 4. table products agree with products of normal forms
    for x in &basis {
        let wx = word_of(t, x)?;
        for y in &basis {
            let wy = word_of(t, y)?;
            let table = t.product_gen(x, y)?;
            let pres = from_normal(&wx.concat(&wy))?;
            rep.record(table == pres, || {
                Violation::new("table product = presentation product", vec![x.to_string(), y.to_string()], &table, &pres)
            });
        }
    }

    // 5. the loop summand is a subalgebra (Chas-Sullivan ring)
    let loops = t.loop_basis(cutoff);
    for x in &loops {
        for y in &loops {
            let p = t.product_gen(x, y)?;
            let closed = p.terms().all(|(g, _)| g.space == Space::LoopSpace);
            rep.record(closed, || Violation::new("loop summand closed", vec![x.to_string(), y.to_string()], &p, "loop classes only"));
        }
    }

    match t.regime {
        Regime::Even => {
            // reduced form ℚ⟨A,U⟩/(A², AU+UA): pt never appears among
            // products of the other generators
            let reduced: Vec<Generator> = basis.iter().copied().filter(|g| g.family != Family::Pt).collect();
            for x in &reduced {
                for y in &reduced {
                    let p = t.product_gen(x, y)?;
                    let ok = p.terms().all(|(g, _)| g.family != Family::Pt);
                    rep.record(ok, || Violation::new("reduced form closed", vec![x.to_string(), y.to_string()], &p, "no pt"));
                }
            }
        }
        Regime::OddWithTwoFields => rep.merge(check_bv_subalgebra(t, cutoff)?),
        Regime::Circle => {
            // loop classes are exactly a^ε t^{2k}: Λ[a] ⊗ ℤ[t², t⁻²]
            for g in &basis {
                let w = circle_word(g);
                let tpow = w.letters.iter().filter(|l| matches!(l, Letter::T | Letter::TInv)).count();
                let even = tpow % 2 == 0;
                let ok = even == (g.space == Space::LoopSpace);
                rep.record(ok, || Violation::new("loop classes = Λ[a]⊗Z[t²,t⁻²]", vec![g.to_string()], &w, "even t-power"));
            }
        }
    }
    Ok(rep)
}

/// Normal monomials whose U/t-power is at most `cutoff`.
fn normal_monomials(regime: Regime, cutoff: i64) -> Vec<Word> {
    use Letter::*;
    let c = cutoff as usize;
    let mut out = Vec::new();
    match regime {
        Regime::Even => {
            out.push(Word::new(vec![]));
            out.push(Word::new(vec![B]));
            for j in 0..=c {
                if j >= 1 {
                    out.push(Word::new(power(U, j)));
                }
                let mut w = vec![A];
                w.extend(power(U, j));
                out.push(Word::new(w));
            }
        }
        Regime::OddWithTwoFields => {
            for e in 0..2 {
                for a in 0..2 {
                    for j in 0..=c {
                        let mut w = power(E, e);
                        w.extend(power(A, a));
                        w.extend(power(U, j));
                        out.push(Word::new(w));
                    }
                }
            }
        }
        Regime::Circle => {
            for a in 0..2 {
                for j in -(2 * cutoff)..=(2 * cutoff) {
                    let mut w = power(Ext, a);
                    let l = if j >= 0 { T } else { TInv };
                    w.extend(power(l, j.unsigned_abs() as usize));
                    out.push(Word::new(w));
                }
            }
        }
    }
    out
}

/// For n ≡ 3 mod 4 the classes B = (0, A) and V = (0, U) generate a copy of
/// ℤ[A′,U′]/(A′²) with A′ ↦ B, U′ ↦ V.
fn check_bv_subalgebra(t: &SphereAlgebraTable, cutoff: i64) -> Result<CheckReport> {
    let mut rep = CheckReport::new();
    let b = GradedElement::generator(t.ring, letter_image(t, Letter::B));
    let v = GradedElement::generator(t.ring, letter_image(t, Letter::V));
    let one = GradedElement::generator(t.ring, t.fund());
    let mul = |x: &GradedElement, y: &GradedElement| super::extended_product(t, x, y);

    // images of A′^a U′^j
    let mut images: HashMap<(u8, i64), GradedElement> = HashMap::new();
    let mut vpow = one.clone();
    for j in 0..=(2 * cutoff) {
        images.insert((0, j), vpow.clone());
        images.insert((1, j), mul(&b, &vpow)?);
        vpow = mul(&vpow, &v)?;
    }
    let mut seen: HashMap<(i64, Generator), (u8, i64)> = HashMap::new();
    for a in 0..2u8 {
        for j in 0..=cutoff {
            let img = &images[&(a, j)];
            match img.as_signed_generator() {
                Some(sg) => {
                    let prev = seen.insert(sg, (a, j));
                    rep.record(prev.is_none(), || {
                        Violation::new("(B,V) monomials independent", vec![format!("A'^{} U'^{}", a, j)], img, "distinct generator")
                    });
                }
                None => rep.record(false, || {
                    Violation::new("(B,V) monomial is ± a generator", vec![format!("A'^{} U'^{}", a, j)], img, "± generator")
                }),
            }
        }
    }
    for a1 in 0..2u8 {
        for j1 in 0..=cutoff {
            for a2 in 0..2u8 {
                for j2 in 0..=cutoff {
                    let lhs = mul(&images[&(a1, j1)], &images[&(a2, j2)])?;
                    let rhs = if a1 + a2 > 1 { GradedElement::zero(t.ring) } else { images[&(a1 + a2, j1 + j2)].clone() };
                    rep.record(lhs == rhs, || {
                        Violation::new(
                            "(B,V) ≅ Z[A',U']/(A'²)",
                            vec![format!("A'^{} U'^{}", a1, j1), format!("A'^{} U'^{}", a2, j2)],
                            &lhs,
                            &rhs,
                        )
                    });
                }
            }
        }
    }
    Ok(rep)
}
