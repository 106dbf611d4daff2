//! Additive homology of P_aSⁿ and ΛSⁿ assembled from the critical
//! manifolds of the round energy functional, which is perfect: each stratum
//! contributes the homology of its critical manifold shifted by its index.

use std::f64::consts::PI;
use std::fmt;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::generator::Space;
use crate::group::AbelianGroupSummary;
use crate::ring::CoefficientRing;

/// Integral homology of the unit tangent bundle USⁿ.
pub fn unit_tangent_homology(n: u32, i: i64) -> AbelianGroupSummary {
    let n = n as i64;
    if n % 2 == 0 {
        if i == 0 || i == 2 * n - 1 {
            AbelianGroupSummary::free(1)
        } else if i == n - 1 {
            AbelianGroupSummary::cyclic(2)
        } else {
            AbelianGroupSummary::zero()
        }
    } else if i == 0 || i == n - 1 || i == n || i == 2 * n - 1 {
        AbelianGroupSummary::free(1)
    } else {
        AbelianGroupSummary::zero()
    }
}

/// Integral homology of Sⁿ.
pub fn sphere_homology(n: u32, i: i64) -> AbelianGroupSummary {
    if i == 0 || i == n as i64 {
        AbelianGroupSummary::free(1)
    } else {
        AbelianGroupSummary::zero()
    }
}

/// Change coefficients by the universal coefficient theorem:
/// H_i(X; R) from H_i(X; ℤ) and H_{i−1}(X; ℤ). Over a field the result is
/// a vector space recorded by its dimension in `free_rank`.
pub fn change_coefficients(h_i: &AbelianGroupSummary, h_im1: &AbelianGroupSummary, ring: CoefficientRing) -> AbelianGroupSummary {
    match ring {
        CoefficientRing::Integers => h_i.clone(),
        CoefficientRing::Rationals => AbelianGroupSummary::free(h_i.free_rank),
        CoefficientRing::FieldOfTwoElements => {
            let two = |g: &AbelianGroupSummary| g.torsion.iter().filter(|q| q.is_power_of_two()).count() as u64;
            AbelianGroupSummary::free(h_i.free_rank + two(h_i) + two(h_im1))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CriticalManifold {
    ConstantLoops,
    UnitTangentBundle,
}

impl CriticalManifold {
    pub fn dimension(self, n: u32) -> i64 {
        match self {
            CriticalManifold::ConstantLoops => n as i64,
            CriticalManifold::UnitTangentBundle => 2 * n as i64 - 1,
        }
    }

    pub fn homology(self, n: u32, i: i64) -> AbelianGroupSummary {
        match self {
            CriticalManifold::ConstantLoops => sphere_homology(n, i),
            CriticalManifold::UnitTangentBundle => unit_tangent_homology(n, i),
        }
    }

    pub fn short(self) -> &'static str {
        match self {
            CriticalManifold::ConstantLoops => "H(S^n)",
            CriticalManifold::UnitTangentBundle => "H(US^n)",
        }
    }
}

/// One critical manifold of the round energy functional.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalStratum {
    pub space: Space,
    pub multiplicity: u64,
    /// Length divided by π (exact).
    pub length_over_pi: u64,
    pub length: f64,
    pub energy: f64,
    pub index: i64,
    pub nullity: i64,
    pub manifold: CriticalManifold,
}

impl CriticalStratum {
    /// The stratum of the given multiplicity in P_aSⁿ (length (2m+1)π) or
    /// ΛSⁿ (length 2mπ, m = 0 the constant loops).
    pub fn new(space: Space, n: u32, multiplicity: u64) -> Self {
        let nn = n as i64;
        let m = multiplicity;
        let (lp, index, manifold) = match space {
            Space::AntipodalPathSpace => (2 * m + 1, 2 * m as i64 * (nn - 1), CriticalManifold::UnitTangentBundle),
            Space::LoopSpace if m == 0 => (0, 0, CriticalManifold::ConstantLoops),
            Space::LoopSpace => (2 * m, (2 * m as i64 - 1) * (nn - 1), CriticalManifold::UnitTangentBundle),
        };
        let length = lp as f64 * PI;
        CriticalStratum {
            space,
            multiplicity: m,
            length_over_pi: lp,
            length,
            energy: length * length,
            index,
            nullity: manifold.dimension(n),
            manifold,
        }
    }

    /// Energy label in the form used by the diagrams: "(3π)^2", "0".
    pub fn energy_label(&self) -> String {
        match self.length_over_pi {
            0 => "0".to_string(),
            1 => "(π)^2".to_string(),
            k => format!("({}π)^2", k),
        }
    }
}

/// Strata ordered by strictly increasing length.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumTable {
    pub space: Space,
    pub n: u32,
    pub strata: Vec<CriticalStratum>,
}

impl SpectrumTable {
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).unwrap_or(Value::Null)
    }
}

/// All strata with length ≤ max_length.
pub fn critical_spectrum(space: Space, n: u32, max_length: f64) -> Result<SpectrumTable> {
    if !(max_length > 0.0) {
        return Err(Error::InvalidArgument("max_length must be positive".into()));
    }
    if n < 2 {
        return Err(Error::UnsupportedDimension(n, "the Morse-Bott tables start at n = 2".into()));
    }
    let mut strata = Vec::new();
    for m in 0.. {
        let s = CriticalStratum::new(space, n, m);
        if s.length > max_length + 1e-12 {
            break;
        }
        strata.push(s);
    }
    Ok(SpectrumTable { space, n, strata })
}

/// The first `levels` strata.
pub fn first_strata(space: Space, n: u32, levels: usize) -> Vec<CriticalStratum> {
    (0..levels as u64).map(|m| CriticalStratum::new(space, n, m)).collect()
}

/// Integral homology in degree i: ⊕ over strata of H_{i − index}(manifold).
fn assemble_integral(space: Space, n: u32, i: i64) -> AbelianGroupSummary {
    let mut out = AbelianGroupSummary::zero();
    if i < 0 {
        return out;
    }
    for m in 0.. {
        let s = CriticalStratum::new(space, n, m);
        if s.index > i {
            break;
        }
        out = out.direct_sum(&s.manifold.homology(n, i - s.index));
    }
    out
}

/// H_i of P_aSⁿ or ΛSⁿ with the given coefficients.
pub fn assemble_homology(space: Space, n: u32, ring: CoefficientRing, i: i64) -> Result<AbelianGroupSummary> {
    if n < 2 {
        return Err(Error::UnsupportedDimension(n, "the Morse-Bott tables start at n = 2".into()));
    }
    if i < 0 {
        return Err(Error::InvalidArgument("degree must be nonnegative".into()));
    }
    Ok(change_coefficients(&assemble_integral(space, n, i), &assemble_integral(space, n, i - 1), ring))
}

/// Rational Betti number of the completing manifold Γ_l: its cohomology is
/// the exterior algebra on one class of degree 2n − 1 and l classes of
/// degree n − 1.
pub fn completing_manifold_betti(n: u32, l: u64, i: i64) -> Result<u64> {
    if n < 2 || n % 2 != 0 {
        return Err(Error::UnsupportedDimension(n, "completing-manifold rings are tabulated for even n".into()));
    }
    let (d, top) = (n as i64 - 1, 2 * n as i64 - 1);
    let mut total = 0u64;
    for eps in 0..2 {
        let r = i - eps * top;
        if r >= 0 && r % d == 0 {
            total += binomial(l, (r / d) as u64);
        }
    }
    Ok(total)
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, j| acc * (n - j) / (j + 1))
}

/// The two classes of H(USⁿ) the ∩_a product is tabulated on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnitTangentClass {
    Point,
    Fundamental,
}

impl std::str::FromStr for UnitTangentClass {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "p0" | "[p0]" | "point" => Ok(UnitTangentClass::Point),
            "US" | "[US]" | "fundamental" => Ok(UnitTangentClass::Fundamental),
            _ => Err(Error::Parse(s.into(), "expected p0 or US".into())),
        }
    }
}

impl fmt::Display for UnitTangentClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UnitTangentClass::Point => "[p0]",
            UnitTangentClass::Fundamental => "[US^n]",
        })
    }
}

/// x ∩_a y on H(USⁿ), n even: ±class or zero.
pub fn cap_a(n: u32, x: UnitTangentClass, y: UnitTangentClass) -> Result<Option<(i64, UnitTangentClass)>> {
    use UnitTangentClass::*;
    if n < 2 || n % 2 != 0 {
        return Err(Error::UnsupportedDimension(n, "∩_a is tabulated for even n".into()));
    }
    Ok(match (x, y) {
        (Point, Point) => None,
        (Point, Fundamental) => Some((1, Point)),
        (Fundamental, Point) => Some((-1, Point)),
        (Fundamental, Fundamental) => Some((1, Fundamental)),
    })
}

/// One box of the stacked diagram: a column (critical level) and the degree
/// range [low, high] occupied by the shifted homology of its manifold.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiagramBox {
    pub energy_label: String,
    pub low: i64,
    pub high: i64,
    pub manifold: String,
}

pub fn diagram_boxes(space: Space, n: u32, levels: usize) -> Vec<DiagramBox> {
    first_strata(space, n, levels)
        .into_iter()
        .map(|s| DiagramBox {
            energy_label: s.energy_label(),
            low: s.index,
            high: s.index + s.manifold.dimension(n),
            manifold: s.manifold.short().to_string(),
        })
        .collect()
}

/// Text rendering: degree on the vertical axis (top to bottom), one column
/// per critical level labelled by its energy, boxes drawn with `+`, `-` and
/// `|` spanning [index, index + dim].
pub fn emit_stacked_diagram(space: Space, n: u32, levels: usize) -> Result<String> {
    if levels == 0 {
        return Err(Error::InvalidArgument("levels must be at least 1".into()));
    }
    if n < 2 {
        return Err(Error::UnsupportedDimension(n, "the Morse-Bott tables start at n = 2".into()));
    }
    let boxes = diagram_boxes(space, n, levels);
    let top = boxes.iter().map(|b| b.high).max().unwrap_or(0);
    let width = boxes.iter().map(|b| b.energy_label.chars().count().max(b.manifold.len())).max().unwrap_or(6) + 2;
    let lw = top.to_string().len().max(3);
    let mut out = String::new();
    for d in (0..=top).rev() {
        let mut line = format!("{:>lw$} |", d, lw = lw);
        for b in &boxes {
            let mid = (b.low + b.high + 1) / 2;
            let cell = if d == b.high || d == b.low {
                format!("+{}+", "-".repeat(width - 2))
            } else if d > b.low && d < b.high {
                if d == mid {
                    format!("|{:^w$}|", b.manifold, w = width - 2)
                } else {
                    format!("|{}|", " ".repeat(width - 2))
                }
            } else {
                " ".repeat(width)
            };
            line.push(' ');
            line.push_str(&cell);
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out.push_str(&format!("{}-+{}\n", "-".repeat(lw), "-".repeat((width + 1) * boxes.len())));
    let mut labels = format!("{} |", " ".repeat(lw));
    for b in &boxes {
        labels.push(' ');
        labels.push_str(&format!("{:^w$}", b.energy_label, w = width));
    }
    out.push_str(labels.trim_end());
    out.push('\n');
    Ok(out)
}

/// Rows of the homology table for the CLI: degree and group.
pub fn homology_rows(space: Space, n: u32, ring: CoefficientRing, max_degree: i64) -> Result<Vec<(i64, AbelianGroupSummary)>> {
    (0..=max_degree).map(|i| Ok((i, assemble_homology(space, n, ring, i)?))).collect()
}

/// Render a group, using field notation (Q^k, (Z2)^k) for field coefficients.
pub fn render_group(g: &AbelianGroupSummary, ring: CoefficientRing) -> String {
    match ring {
        CoefficientRing::Integers => g.to_string(),
        _ => match g.free_rank {
            0 => "0".into(),
            1 => ring.to_string(),
            r => format!("{}^{}", ring, r),
        },
    }
}

pub fn homology_json(space: Space, n: u32, ring: CoefficientRing, rows: &[(i64, AbelianGroupSummary)]) -> Value {
    json!({
        "space": space.tag(),
        "n": n,
        "coeff": ring.to_string(),
        "rows": rows.iter().map(|(i, g)| json!({
            "degree": i,
            "free_rank": g.free_rank,
            "torsion": g.torsion,
            "group": render_group(g, ring),
        })).collect::<Vec<_>>(),
    })
}
