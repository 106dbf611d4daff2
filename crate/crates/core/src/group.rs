use std::fmt;

use serde::{Deserialize, Serialize};

/// Finitely generated abelian group ℤ^r ⊕ ⊕ ℤ/q_i, or — for field
/// coefficients — a vector space of dimension `free_rank` (torsion empty).
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct AbelianGroupSummary {
    pub free_rank: u64,
    /// Prime-power orders, kept sorted.
    pub torsion: Vec<u64>,
}

impl AbelianGroupSummary {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn free(r: u64) -> Self {
        AbelianGroupSummary { free_rank: r, torsion: Vec::new() }
    }

    pub fn cyclic(q: u64) -> Self {
        assert!(q >= 2, "torsion orders are at least 2");
        AbelianGroupSummary { free_rank: 0, torsion: vec![q] }
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn direct_sum(&self, other: &AbelianGroupSummary) -> AbelianGroupSummary {
        let mut torsion = self.torsion.clone();
        torsion.extend_from_slice(&other.torsion);
        torsion.sort_unstable();
        AbelianGroupSummary { free_rank: self.free_rank + other.free_rank, torsion }
    }

    /// Rank after tensoring with ℚ.
    pub fn rational_rank(&self) -> u64 {
        self.free_rank
    }
}

impl fmt::Display for AbelianGroupSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{}", r)),
        }
        for q in &self.torsion {
            parts.push(format!("Z{}", q));
        }
        f.write_str(&parts.join(" + "))
    }
}
