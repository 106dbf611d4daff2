use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which summand a homology class lives in: the free loop space or the
/// antipodal path space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Space {
    LoopSpace,
    AntipodalPathSpace,
}

impl Space {
    pub fn tag(self) -> &'static str {
        match self {
            Space::LoopSpace => "L",
            Space::AntipodalPathSpace => "P",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    APrime,
    BPrime,
    Pt,
    Fund,
    E,
    U,
    V,
    /// γ_k, degree 0 path class of the circle (k ∈ ℤ+½)
    Gamma,
    /// Γ_k, degree 1 path class of the circle
    BigGamma,
    /// γ′_k, degree 0 loop class of the circle (k ∈ ℤ)
    GammaPrime,
    /// Γ′_k, degree 1 loop class of the circle
    BigGammaPrime,
}

impl Family {
    pub const ALL: [Family; 13] = [
        Family::A,
        Family::B,
        Family::APrime,
        Family::BPrime,
        Family::Pt,
        Family::Fund,
        Family::E,
        Family::U,
        Family::V,
        Family::Gamma,
        Family::BigGamma,
        Family::GammaPrime,
        Family::BigGammaPrime,
    ];

    pub fn space(self) -> Space {
        match self {
            Family::A | Family::B | Family::E | Family::V | Family::Gamma | Family::BigGamma => {
                Space::AntipodalPathSpace
            }
            _ => Space::LoopSpace,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::A => "A",
            Family::B => "B",
            Family::APrime => "A'",
            Family::BPrime => "B'",
            Family::Pt => "pt",
            Family::Fund => "fund",
            Family::E => "E",
            Family::U => "U",
            Family::V => "V",
            Family::Gamma => "g",
            Family::BigGamma => "G",
            Family::GammaPrime => "g'",
            Family::BigGammaPrime => "G'",
        }
    }

    /// Families that carry no index in their rendering.
    pub fn is_indexless(self) -> bool {
        matches!(self, Family::Pt | Family::Fund | Family::E)
    }

    /// The partner family under the loop/path identification used by the
    /// trivial extension: A′ ↔ A, B′ ↔ B, fund ↔ E, U ↔ V, γ′ ↔ γ, Γ′ ↔ Γ.
    /// `pt` has no partner.
    pub fn twin(self) -> Option<Family> {
        Some(match self {
            Family::A => Family::APrime,
            Family::APrime => Family::A,
            Family::B => Family::BPrime,
            Family::BPrime => Family::B,
            Family::Fund => Family::E,
            Family::E => Family::Fund,
            Family::U => Family::V,
            Family::V => Family::U,
            Family::Gamma => Family::GammaPrime,
            Family::GammaPrime => Family::Gamma,
            Family::BigGamma => Family::BigGammaPrime,
            Family::BigGammaPrime => Family::BigGamma,
            Family::Pt => return None,
        })
    }

    fn from_name(s: &str) -> Option<Family> {
        let s = s.replace('′', "'");
        Some(match s.as_str() {
            "A" => Family::A,
            "B" => Family::B,
            "A'" => Family::APrime,
            "B'" => Family::BPrime,
            "pt" | "p" | "p0" => Family::Pt,
            "fund" | "1" => Family::Fund,
            "E" => Family::E,
            "U" => Family::U,
            "V" => Family::V,
            "g" | "γ" => Family::Gamma,
            "G" | "Γ" => Family::BigGamma,
            "g'" | "γ'" => Family::GammaPrime,
            "G'" | "Γ'" => Family::BigGammaPrime,
            _ => return None,
        })
    }
}

/// Exact index in ½ℤ, stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HalfIndex(pub i64);

impl HalfIndex {
    pub fn int(k: i64) -> Self {
        HalfIndex(2 * k)
    }

    /// `k + ½` for the circle's path classes.
    pub fn half(twice: i64) -> Self {
        HalfIndex(twice)
    }

    pub fn twice(self) -> i64 {
        self.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    /// Integer value; panics on a half-integer (callers validate first).
    pub fn value(self) -> i64 {
        assert!(self.is_integer(), "half-integer index used as integer");
        self.0 / 2
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64 / 2.0
    }

    pub fn abs_le(self, cutoff: i64) -> bool {
        self.0.abs() <= 2 * cutoff
    }
}

impl std::ops::Add for HalfIndex {
    type Output = HalfIndex;
    fn add(self, o: HalfIndex) -> HalfIndex {
        HalfIndex(self.0 + o.0)
    }
}

impl fmt::Display for HalfIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl FromStr for HalfIndex {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if let Some((a, b)) = t.split_once('/') {
            let num: i64 = a.trim().parse().map_err(|_| Error::Parse(s.into(), "bad index".into()))?;
            match b.trim() {
                "2" => Ok(HalfIndex(num)),
                "1" => Ok(HalfIndex::int(num)),
                _ => Err(Error::BadIndex(s.into(), "denominator must be 1 or 2".into())),
            }
        } else if let Some(stripped) = t.strip_suffix(".5") {
            // "1.5" / "-0.5"
            let neg = stripped.starts_with('-');
            let whole: i64 = stripped.parse().map_err(|_| Error::Parse(s.into(), "bad index".into()))?;
            Ok(HalfIndex(2 * whole + if neg { -1 } else { 1 }))
        } else {
            let k: i64 = t.parse().map_err(|_| Error::Parse(s.into(), "bad index".into()))?;
            Ok(HalfIndex::int(k))
        }
    }
}

/// A tagged basis class. Ordering is (space, family, index, n), which is the
/// canonical display order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Generator {
    pub space: Space,
    pub family: Family,
    pub index: HalfIndex,
    pub n: u32,
}

impl Generator {
    pub fn new(family: Family, index: HalfIndex, n: u32) -> Self {
        Generator { space: family.space(), family, index, n }
    }

    pub fn int(family: Family, k: i64, n: u32) -> Self {
        Generator::new(family, HalfIndex::int(k), n)
    }

    pub fn a(k: i64, n: u32) -> Self {
        Generator::int(Family::A, k, n)
    }
    pub fn b(k: i64, n: u32) -> Self {
        Generator::int(Family::B, k, n)
    }
    pub fn a_prime(k: i64, n: u32) -> Self {
        Generator::int(Family::APrime, k, n)
    }
    pub fn b_prime(k: i64, n: u32) -> Self {
        Generator::int(Family::BPrime, k, n)
    }
    pub fn pt(n: u32) -> Self {
        Generator::int(Family::Pt, 0, n)
    }
    pub fn fund(n: u32) -> Self {
        Generator::int(Family::Fund, 0, n)
    }
    pub fn e(n: u32) -> Self {
        Generator::int(Family::E, 0, n)
    }
    pub fn u(k: i64, n: u32) -> Self {
        Generator::int(Family::U, k, n)
    }
    pub fn v(k: i64, n: u32) -> Self {
        Generator::int(Family::V, k, n)
    }

    /// Twice-index constructor for the circle families.
    pub fn circle(family: Family, twice: i64) -> Self {
        Generator::new(family, HalfIndex(twice), 1)
    }

    /// Homological degree; a pure function of (family, index, n).
    pub fn degree(&self) -> i64 {
        let n = self.n as i64;
        let k = || self.index.value();
        match self.family {
            Family::A | Family::APrime => k() * (n - 1),
            Family::B | Family::BPrime => k() * (n - 1) + 2 * n - 1,
            Family::Pt => 0,
            Family::Fund | Family::E => n,
            Family::U | Family::V => k() * (n - 1) + n,
            Family::Gamma | Family::GammaPrime => 0,
            Family::BigGamma | Family::BigGammaPrime => n,
        }
    }

    pub fn twin(&self) -> Option<Generator> {
        self.family.twin().map(|f| Generator { space: f.space(), family: f, index: self.index, n: self.n })
    }

    /// Parse `A[0]`, `B'[5]`, `pt`, `g[1/2]`, `G'[-1]` for sphere dimension `n`.
    /// No regime-specific checks happen here.
    pub fn parse(s: &str, n: u32) -> Result<Generator> {
        let t = s.trim();
        let (name, idx) = if let Some(open) = t.find('[') {
            let close = t.rfind(']').ok_or_else(|| Error::Parse(s.into(), "missing ']'".into()))?;
            (&t[..open], Some(&t[open + 1..close]))
        } else if let Some((a, b)) = t.split_once('_') {
            (a, Some(b))
        } else {
            (t, None)
        };
        let family = Family::from_name(name.trim())
            .ok_or_else(|| Error::Parse(s.into(), format!("unknown family {:?}", name)))?;
        let index = match idx {
            Some(i) => i.parse::<HalfIndex>()?,
            None if family.is_indexless() => HalfIndex::int(0),
            None => return Err(Error::Parse(s.into(), "missing index".into())),
        };
        if family.is_indexless() && index != HalfIndex::int(0) {
            return Err(Error::BadIndex(s.into(), format!("{} carries no index", family.name())));
        }
        Ok(Generator::new(family, index, n))
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.family.is_indexless() {
            f.write_str(self.family.name())
        } else {
            write!(f, "{}[{}]", self.family.name(), self.index)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degrees() {
        assert_eq!(Generator::b(0, 2).degree(), 3);
        assert_eq!(Generator::a_prime(3, 4).degree(), 9);
        assert_eq!(Generator::fund(5).degree(), 5);
        assert_eq!(Generator::circle(Family::BigGamma, 1).degree(), 1);
    }

    #[test]
    fn parse_round_trip() {
        for s in ["A[0]", "B'[5]", "pt", "fund", "E", "g[1/2]", "G'[-3]", "G[-1/2]", "V[2]"] {
            let g = Generator::parse(s, 2).unwrap();
            assert_eq!(g.to_string(), s);
        }
        assert_eq!(Generator::parse("A′[3]", 4).unwrap(), Generator::a_prime(3, 4));
        assert_eq!(Generator::parse("γ[0.5]", 1).unwrap(), Generator::circle(Family::Gamma, 1));
        assert!(Generator::parse("Q[1]", 2).is_err());
        assert!(Generator::parse("A", 2).is_err());
    }

    #[test]
    fn display_order_is_space_family_index() {
        let mut v = vec![Generator::b(0, 2), Generator::a_prime(1, 2), Generator::a(2, 2), Generator::a(0, 2)];
        v.sort();
        let s: Vec<String> = v.iter().map(|g| g.to_string()).collect();
        assert_eq!(s, ["A'[1]", "A[0]", "A[2]", "B[0]"]);
    }
}
