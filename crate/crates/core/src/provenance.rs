//! A fingerprint of the embedded generator tables, so that every result can
//! be traced to the exact table contents that produced it.

use sha2::{Digest, Sha256};

use crate::coalgebra::{CoproductTables, EvenSphereCoproducts};
use crate::sphere::SphereAlgebraTable;

/// Dimensions whose tables enter the fingerprint, one per regime shape.
const DIMENSIONS: [u32; 5] = [1, 2, 3, 4, 7];
const CUTOFF: i64 = 4;

/// Canonical text rendering of the product tables for n ∈ {1, 2, 3, 4, 7}
/// and the coproduct tables for n ∈ {2, 4}, all up to index 4.
pub fn canonical_tables() -> String {
    let mut out = String::new();
    for n in DIMENSIONS {
        let t = SphereAlgebraTable::new(n).expect("tabulated dimension");
        let basis = t.basis_all(CUTOFF);
        for x in &basis {
            for y in &basis {
                let p = t.product_gen(x, y).map(|e| e.to_string()).unwrap_or_else(|e| format!("error: {}", e));
                out.push_str(&format!("n={} {} * {} = {}\n", n, x, y, p));
            }
        }
    }
    for n in [2, 4] {
        let c = EvenSphereCoproducts::new(n).expect("even dimension");
        let t = SphereAlgebraTable::new(n).expect("even dimension");
        for g in t.basis_all(CUTOFF) {
            let render = |r: crate::Result<crate::coalgebra::TensorElement>| r.map(|e| e.to_string()).unwrap_or_else(|_| "-".into());
            out.push_str(&format!(
                "n={} {}: copairing {} | left {} | right {} | loop {}\n",
                n,
                g,
                render(c.copairing_gen(&g)),
                render(c.comodule_left_gen(&g)),
                render(c.comodule_right_gen(&g)),
                render(c.loop_coproduct_gen(&g)),
            ));
        }
    }
    out
}

/// First 16 hex digits of the SHA-256 of [`canonical_tables`].
pub fn table_hash() -> String {
    let digest = Sha256::digest(canonical_tables().as_bytes());
    digest.iter().take(8).map(|b| format!("{:02x}", b)).collect()
}
