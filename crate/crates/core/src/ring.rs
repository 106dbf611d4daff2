use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact coefficient. Integers and F2 values are stored as rationals with
/// denominator one; the ring decides which values are admissible.
pub type Coeff = BigRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CoefficientRing {
    Integers,
    Rationals,
    FieldOfTwoElements,
}

impl CoefficientRing {
    /// Bring `c` into canonical form for this ring, rejecting values that
    /// do not belong to it.
    pub fn normalize(self, c: &Coeff) -> Result<Coeff> {
        match self {
            CoefficientRing::Rationals => Ok(c.clone()),
            CoefficientRing::Integers => {
                if c.is_integer() {
                    Ok(c.clone())
                } else {
                    Err(Error::NotInRing { coeff: c.to_string(), ring: self })
                }
            }
            CoefficientRing::FieldOfTwoElements => {
                if !c.is_integer() {
                    return Err(Error::NotInRing { coeff: c.to_string(), ring: self });
                }
                let r = c.to_integer().mod_floor(&BigInt::from(2));
                Ok(BigRational::from_integer(r))
            }
        }
    }

    pub fn is_field(self) -> bool {
        !matches!(self, CoefficientRing::Integers)
    }

    pub fn one(self) -> Coeff {
        Coeff::one()
    }

    pub fn zero(self) -> Coeff {
        Coeff::zero()
    }
}

impl fmt::Display for CoefficientRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CoefficientRing::Integers => "Z",
            CoefficientRing::Rationals => "Q",
            CoefficientRing::FieldOfTwoElements => "Z2",
        })
    }
}

impl FromStr for CoefficientRing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "Z" | "z" | "ZZ" | "int" | "integers" => Ok(CoefficientRing::Integers),
            "Q" | "q" | "QQ" | "rat" | "rationals" => Ok(CoefficientRing::Rationals),
            "Z2" | "z2" | "F2" | "f2" | "GF2" => Ok(CoefficientRing::FieldOfTwoElements),
            other => Err(Error::Parse(other.to_string(), "expected Z, Q or Z2".into())),
        }
    }
}

/// Small-integer coefficient helper.
pub fn c(v: i64) -> Coeff {
    BigRational::from_integer(BigInt::from(v))
}

/// Parse "3", "-2", "1/2".
pub fn parse_coeff(s: &str) -> Result<Coeff> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| Error::Parse(s.into(), "bad numerator".into()))?;
        let den: BigInt = den.trim().parse().map_err(|_| Error::Parse(s.into(), "bad denominator".into()))?;
        if den.is_zero() {
            return Err(Error::Parse(s.into(), "zero denominator".into()));
        }
        Ok(BigRational::new(num, den))
    } else {
        let num: BigInt = s.parse().map_err(|_| Error::Parse(s.into(), "bad integer".into()))?;
        Ok(BigRational::from_integer(num))
    }
}
