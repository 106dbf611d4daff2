//! Oracles shared between integration test targets.

#![allow(dead_code)]

use sphere_strings::AbelianGroupSummary;

/// The closed-form integral homology of the antipodal path space, case by
/// case as stated for odd n ≥ 3, even n ≥ 4 and n = 2.
pub fn path_space_oracle(n: i64, i: i64) -> AbelianGroupSummary {
    let z = AbelianGroupSummary::free(1);
    let z2 = AbelianGroupSummary::cyclic(2);
    let zero = AbelianGroupSummary::zero();
    let d = n - 1;
    if n == 2 {
        return match i {
            i if i % 2 == 0 => z,
            1 => z2,
            _ => z.direct_sum(&z2),
        };
    }
    if n % 2 == 1 {
        let hit = i % d == 0 || (i >= n && (i - n) % d == 0);
        return if hit { z } else { zero };
    }
    let p = 2 * n - 2;
    if i % p == 0 || (i >= 2 * n - 1 && (i - (2 * n - 1)) % p == 0) {
        z
    } else if i >= n - 1 && (i - (n - 1)) % p == 0 {
        z2
    } else {
        zero
    }
}

/// Reference layout of the extended product table for an even sphere: (degree, row,
/// label) of its eight entries.
pub fn reference_layout(n: i64) -> [(i64, &'static str, &'static str); 8] {
    [
        (0, "P", "S"),
        (n - 1, "L", "S^2"),
        (2 * n - 2, "P", "S^3"),
        (2 * n - 1, "P", "WS"),
        (3 * n - 3, "L", "S^4"),
        (3 * n - 2, "L", "WS^2"),
        (4 * n - 4, "P", "S^5"),
        (4 * n - 3, "P", "WS^3"),
    ]
}
