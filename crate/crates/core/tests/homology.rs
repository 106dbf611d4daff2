use sphere_strings::homology::{
    assemble_homology, cap_a, completing_manifold_betti, critical_spectrum, diagram_boxes, emit_stacked_diagram,
    homology_json, homology_rows, render_group, unit_tangent_homology, CriticalManifold, UnitTangentClass,
};
use sphere_strings::*;

mod common;
use common::path_space_oracle;

const Z: CoefficientRing = CoefficientRing::Integers;
const Q: CoefficientRing = CoefficientRing::Rationals;
const F2: CoefficientRing = CoefficientRing::FieldOfTwoElements;
const P: Space = Space::AntipodalPathSpace;
const L: Space = Space::LoopSpace;

#[test]
fn path_space_homology_matches_closed_form() {
    for n in 2..=7u32 {
        for i in 0..=50 {
            assert_eq!(assemble_homology(P, n, Z, i).unwrap(), path_space_oracle(n as i64, i), "n={} i={}", n, i);
        }
    }
}

#[test]
fn homology_examples() {
    let g = assemble_homology(P, 2, Z, 3).unwrap();
    assert_eq!(g, AbelianGroupSummary::free(1).direct_sum(&AbelianGroupSummary::cyclic(2)));
    assert_eq!(g.to_string(), "Z + Z2");
    assert_eq!(assemble_homology(P, 4, Z, 3).unwrap(), AbelianGroupSummary::cyclic(2));
    assert_eq!(assemble_homology(P, 3, Z, 0).unwrap(), AbelianGroupSummary::free(1));
    assert_eq!(unit_tangent_homology(4, 3), AbelianGroupSummary::cyclic(2));
    assert_eq!(unit_tangent_homology(3, 2), AbelianGroupSummary::free(1));
    assert_eq!(unit_tangent_homology(2, 1), AbelianGroupSummary::cyclic(2));
    assert!(assemble_homology(P, 1, Z, 0).is_err());
    assert!(assemble_homology(P, 2, Z, -1).is_err());
}

#[test]
fn odd_spheres_agree_both_ways() {
    for n in [3u32, 5, 7] {
        for i in 0..=60 {
            assert_eq!(assemble_homology(P, n, Z, i).unwrap(), assemble_homology(L, n, Z, i).unwrap(), "n={} i={}", n, i);
        }
    }
}

#[test]
fn even_spheres_differ_between_the_two_spaces() {
    for n in [2u32, 4, 6] {
        assert!((0..=30).any(|i| assemble_homology(P, n, Z, i).unwrap() != assemble_homology(L, n, Z, i).unwrap()));
        // degree n is empty in the path space
        assert!(assemble_homology(P, n, Z, n as i64).unwrap().is_zero() || n == 2);
    }
}

#[test]
fn reduced_rational_sum_counts_the_two_progressions() {
    for n in [2i64, 4, 6, 8] {
        for i in 0..=60 {
            let p = assemble_homology(P, n as u32, Q, i).unwrap().rational_rank();
            let l = assemble_homology(L, n as u32, Q, i).unwrap().rational_rank();
            let reduced = p + l - if i == 0 { 1 } else { 0 };
            let d = n - 1;
            let expected = (i % d == 0) as u64 + (i >= n && (i - n) % d == 0) as u64;
            assert_eq!(reduced, expected, "n={} i={}", n, i);
        }
    }
}

#[test]
fn ranks_match_algebra_generator_counts() {
    for n in [2u32, 3, 4, 6, 7] {
        let t = SphereAlgebraTable::new(n).unwrap();
        for (space, basis) in [(P, t.path_basis(80)), (L, t.loop_basis(80))] {
            for i in 0..=40 {
                let count = basis.iter().filter(|g| g.degree() == i).count() as u64;
                let rank = assemble_homology(space, n, Q, i).unwrap().rational_rank();
                assert_eq!(rank, count, "n={} {:?} i={}", n, space, i);
            }
        }
    }
}

#[test]
fn coefficient_change() {
    // Z2 in degree n − 1 contributes to degrees n − 1 and n mod 2
    assert_eq!(assemble_homology(P, 4, F2, 3).unwrap().free_rank, 1);
    assert_eq!(assemble_homology(P, 4, F2, 4).unwrap().free_rank, 1);
    assert_eq!(assemble_homology(P, 4, Q, 3).unwrap().free_rank, 0);
    assert_eq!(render_group(&assemble_homology(P, 2, Q, 3).unwrap(), Q), "Q");
    let rows = homology_rows(P, 2, Z, 4).unwrap();
    assert_eq!(rows.len(), 5);
    let j = homology_json(P, 2, Z, &rows);
    assert_eq!(j["rows"][3]["group"], "Z + Z2");
}

#[test]
fn spectrum_examples() {
    let s = critical_spectrum(P, 2, 10.0).unwrap();
    assert_eq!(s.strata.iter().map(|x| (x.length_over_pi, x.index)).collect::<Vec<_>>(), vec![(1, 0), (3, 2)]);
    let l = critical_spectrum(L, 2, 7.0).unwrap();
    assert_eq!(l.strata.iter().map(|x| (x.length_over_pi, x.index)).collect::<Vec<_>>(), vec![(0, 0), (2, 1)]);
    assert_eq!(l.strata[0].manifold, CriticalManifold::ConstantLoops);
    let p5 = critical_spectrum(P, 5, 4.0).unwrap();
    assert_eq!(p5.strata.len(), 1);
    assert_eq!((p5.strata[0].index, p5.strata[0].nullity), (0, 9));
    assert!(critical_spectrum(P, 2, 0.0).is_err());
    for n in 2..=7 {
        let s = critical_spectrum(P, n, 40.0).unwrap();
        assert!(s.strata.windows(2).all(|w| w[0].length < w[1].length));
        for st in &s.strata {
            assert!((st.energy - st.length * st.length).abs() < 1e-9);
            assert_eq!(st.index, 2 * st.multiplicity as i64 * (n as i64 - 1));
        }
    }
}

#[test]
fn diagram_examples() {
    let b = diagram_boxes(P, 4, 2);
    assert_eq!(b.iter().map(|x| (x.energy_label.as_str(), x.low, x.high)).collect::<Vec<_>>(), vec![("(π)^2", 0, 7), ("(3π)^2", 6, 13)]);
    let b = diagram_boxes(L, 4, 2);
    assert_eq!(b.iter().map(|x| (x.low, x.high)).collect::<Vec<_>>(), vec![(0, 4), (3, 10)]);
    let b = diagram_boxes(P, 2, 1);
    assert_eq!((b[0].low, b[0].high), (0, 3));

    let text = emit_stacked_diagram(P, 2, 1).unwrap();
    let expected = concat!(
        "  3 | +-------+\n",
        "  2 | |H(US^n)|\n",
        "  1 | |       |\n",
        "  0 | +-------+\n",
        "----+----------\n",
        "    |   (π)^2\n",
    );
    assert_eq!(text, expected);
    let text = emit_stacked_diagram(P, 4, 3).unwrap();
    assert!(text.lines().count() == 22);
    assert!(text.contains("(5π)^2"));
    assert!(emit_stacked_diagram(P, 4, 0).is_err());
}

#[test]
fn completing_manifold_betti_examples() {
    assert_eq!(completing_manifold_betti(2, 1, 1).unwrap(), 1);
    assert_eq!(completing_manifold_betti(2, 0, 3).unwrap(), 1);
    assert_eq!(completing_manifold_betti(2, 2, 2).unwrap(), 1);
    assert!(completing_manifold_betti(3, 1, 1).is_err());
    // total dimension 2^{l+1}
    for n in [2u32, 4, 6] {
        for l in 0..6u64 {
            let total: u64 = (0..=200).map(|i| completing_manifold_betti(n, l, i).unwrap()).sum();
            assert_eq!(total, 1 << (l + 1));
        }
    }
}

#[test]
fn cap_a_examples() {
    use UnitTangentClass::*;
    assert_eq!(cap_a(2, Point, Fundamental).unwrap(), Some((1, Point)));
    assert_eq!(cap_a(2, Fundamental, Point).unwrap(), Some((-1, Point)));
    assert_eq!(cap_a(4, Point, Point).unwrap(), None);
    assert_eq!(cap_a(4, Fundamental, Fundamental).unwrap(), Some((1, Fundamental)));
    assert!(cap_a(3, Point, Point).is_err());
    assert!("bogus".parse::<UnitTangentClass>().is_err());
}
