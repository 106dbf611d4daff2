use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::generator::Generator;
use crate::ring::{c, Coeff, CoefficientRing};

/// Degree of an element: homogeneous elements have one, sums across
/// degrees are `Mixed`. The zero element is reported as `Zero`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Degree {
    Zero,
    Homogeneous(i64),
    Mixed,
}

/// Finite formal sum of generators with exact coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GradedElement {
    ring: CoefficientRing,
    terms: BTreeMap<Generator, Coeff>,
}

impl GradedElement {
    pub fn zero(ring: CoefficientRing) -> Self {
        GradedElement { ring, terms: BTreeMap::new() }
    }

    pub fn generator(ring: CoefficientRing, g: Generator) -> Self {
        Self::term(ring, g, Coeff::one())
    }

    /// `sign·g` with a small integer coefficient.
    pub fn signed(ring: CoefficientRing, sign: i64, g: Generator) -> Self {
        Self::term(ring, g, c(sign))
    }

    pub fn term(ring: CoefficientRing, g: Generator, coeff: Coeff) -> Self {
        let mut e = Self::zero(ring);
        e.add_term(g, coeff).expect("integral coefficient");
        e
    }

    pub fn from_terms<I: IntoIterator<Item = (Generator, Coeff)>>(ring: CoefficientRing, it: I) -> Result<Self> {
        let mut e = Self::zero(ring);
        for (g, k) in it {
            e.add_term(g, k)?;
        }
        Ok(e)
    }

    pub fn ring(&self) -> CoefficientRing {
        self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Generator, &Coeff)> {
        self.terms.iter()
    }

    pub fn coeff(&self, g: &Generator) -> Coeff {
        self.terms.get(g).cloned().unwrap_or_else(Coeff::zero)
    }

    /// Add `k·g` in place, pruning zeros.
    pub fn add_term(&mut self, g: Generator, k: Coeff) -> Result<()> {
        let k = self.ring.normalize(&k)?;
        if k.is_zero() {
            return Ok(());
        }
        let entry = self.terms.entry(g).or_insert_with(Coeff::zero);
        *entry = self.ring.normalize(&(&*entry + k))?;
        if entry.is_zero() {
            self.terms.remove(&g);
        }
        Ok(())
    }

    pub fn add_scaled(&mut self, other: &GradedElement, k: &Coeff) -> Result<()> {
        if other.ring != self.ring {
            return Err(Error::RingMismatch(self.ring, other.ring));
        }
        for (g, v) in &other.terms {
            self.add_term(*g, v * k)?;
        }
        Ok(())
    }

    pub fn scale(&self, k: &Coeff) -> Result<GradedElement> {
        let mut out = GradedElement::zero(self.ring);
        out.add_scaled(self, k)?;
        Ok(out)
    }

    pub fn neg(&self) -> GradedElement {
        self.scale(&c(-1)).expect("negation stays in ring")
    }

    /// Reduce coefficients into another ring (e.g. ℤ → ℤ₂).
    pub fn change_ring(&self, ring: CoefficientRing) -> Result<GradedElement> {
        GradedElement::from_terms(ring, self.terms.iter().map(|(g, k)| (*g, k.clone())))
    }

    pub fn degree(&self) -> Degree {
        let mut it = self.terms.keys().map(|g| g.degree());
        match it.next() {
            None => Degree::Zero,
            Some(d) => {
                if it.all(|e| e == d) {
                    Degree::Homogeneous(d)
                } else {
                    Degree::Mixed
                }
            }
        }
    }

    /// Single term `±g` if the element has exactly that shape.
    pub fn as_signed_generator(&self) -> Option<(i64, Generator)> {
        if self.terms.len() != 1 {
            return None;
        }
        let (g, k) = self.terms.iter().next()?;
        if k.is_one() {
            Some((1, *g))
        } else if (-k).is_one() {
            Some((-1, *g))
        } else {
            None
        }
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(g, k)| {
                json!({
                    "space": g.space.tag(),
                    "family": g.family.name(),
                    "index": index_json(g),
                    "coeff": k.to_string(),
                })
            })
            .collect();
        json!({ "terms": terms })
    }
}

pub(crate) fn index_json(g: &Generator) -> Value {
    if g.index.is_integer() {
        json!(g.index.value())
    } else {
        json!(g.index.as_f64())
    }
}

/// Returns `cx·x + cy·y`.
pub fn combine(x: &GradedElement, y: &GradedElement, cx: &Coeff, cy: &Coeff) -> Result<GradedElement> {
    if x.ring != y.ring {
        return Err(Error::RingMismatch(x.ring, y.ring));
    }
    let mut out = GradedElement::zero(x.ring);
    out.add_scaled(x, cx)?;
    out.add_scaled(y, cy)?;
    Ok(out)
}

/// Free-standing degree query.
pub fn degree(x: &GradedElement) -> Degree {
    x.degree()
}

pub(crate) fn write_sum<'a, K: fmt::Display + 'a>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (K, &'a Coeff)>,
) -> fmt::Result {
    let mut first = true;
    for (g, k) in terms {
        let neg = k.is_negative();
        let abs = k.abs();
        if first {
            if neg {
                f.write_str("-")?;
            }
        } else {
            f.write_str(if neg { " - " } else { " + " })?;
        }
        if abs.is_one() {
            write!(f, "{}", g)?;
        } else {
            write!(f, "{}*{}", abs, g)?;
        }
        first = false;
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

impl fmt::Display for GradedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_sum(f, self.terms.iter())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::Generator;

    const Q: CoefficientRing = CoefficientRing::Rationals;

    #[test]
    fn combine_cancels() {
        let a0 = GradedElement::generator(Q, Generator::a(0, 2));
        let z = combine(&a0, &a0, &c(1), &c(-1)).unwrap();
        assert!(z.is_zero());
        assert_eq!(z.to_string(), "0");
    }

    #[test]
    fn combine_renders_canonically() {
        let a0 = GradedElement::generator(Q, Generator::a(0, 2));
        let b0 = GradedElement::generator(Q, Generator::b(0, 2));
        let s = combine(&a0, &b0, &c(2), &c(3)).unwrap();
        assert_eq!(s.to_string(), "2*A[0] + 3*B[0]");
        assert_eq!(s.degree(), Degree::Mixed);
        assert_eq!(
            s.to_json().to_string(),
            r#"{"terms":[{"space":"P","family":"A","index":0,"coeff":"2"},{"space":"P","family":"B","index":0,"coeff":"3"}]}"#
        );
    }

    #[test]
    fn characteristic_two() {
        let r = CoefficientRing::FieldOfTwoElements;
        let a0 = GradedElement::generator(r, Generator::a(0, 2));
        assert!(combine(&a0, &a0, &c(1), &c(1)).unwrap().is_zero());
    }

    #[test]
    fn ring_mismatch_is_an_error() {
        let a = GradedElement::generator(Q, Generator::a(0, 2));
        let b = GradedElement::generator(CoefficientRing::Integers, Generator::a(0, 2));
        assert!(matches!(combine(&a, &b, &c(1), &c(1)), Err(Error::RingMismatch(..))));
    }

    #[test]
    fn negative_and_rational_rendering() {
        let e = GradedElement::from_terms(
            Q,
            [(Generator::a_prime(1, 2), c(-1)), (Generator::b_prime(5, 2), crate::ring::parse_coeff("3/2").unwrap())],
        )
        .unwrap();
        assert_eq!(e.to_string(), "-A'[1] + 3/2*B'[5]");
    }
}
