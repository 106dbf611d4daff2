use num_traits::Zero;
use proptest::prelude::*;
use sphere_strings::coalgebra::{
    apply_map, comodule_left, comodule_right, copairing, dual_product, dual_product_cochain, kronecker, loop_coproduct,
    product_layout, verify_gh_structure, verify_gh_structure_with, CohomologyGenerator, CoproductMap, CoproductTables,
    DualProduct, EvenSphereCoproducts, TensorElement,
};
use sphere_strings::ring::c;
use sphere_strings::*;

mod common;

fn el(n: u32, s: &str) -> GradedElement {
    SphereAlgebraTable::new(n).unwrap().parse_element(s).unwrap()
}

fn alpha(i: i64) -> CohomologyGenerator {
    CohomologyGenerator::alpha(i)
}

fn beta(i: i64) -> CohomologyGenerator {
    CohomologyGenerator::beta(i)
}

#[test]
fn copairing_examples() {
    assert_eq!(copairing(2, &el(2, "A'[1]")).unwrap().to_string(), "A[0]⊗A[0]");
    assert_eq!(copairing(2, &el(2, "B'[1]")).unwrap().to_string(), "A[0]⊗B[0] + B[0]⊗A[0]");
    assert_eq!(copairing(2, &el(2, "A'[3]")).unwrap().to_string(), "A[0]⊗A[2] + A[2]⊗A[0]");
    // linear in the input
    assert_eq!(copairing(4, &el(4, "2*A'[1] - A'[1]")).unwrap().to_string(), "A[0]⊗A[0]");
}

#[test]
fn comodule_examples() {
    assert_eq!(comodule_left(2, &el(2, "A[2]")).unwrap().to_string(), "A'[1]⊗A[0]");
    assert_eq!(comodule_right(2, &el(2, "A[2]")).unwrap().to_string(), "-A[0]⊗A'[1]");
    assert_eq!(comodule_left(2, &el(2, "B[2]")).unwrap().to_string(), "A'[1]⊗B[0] - B'[1]⊗A[0]");
    assert!(comodule_left(2, &el(2, "B[0]")).unwrap().is_zero());
    assert_eq!(loop_coproduct(2, &el(2, "A'[3]")).unwrap().to_string(), "A'[1]⊗A'[1]");
    assert!(loop_coproduct(2, &el(2, "B'[1]")).unwrap().is_zero());
}

#[test]
fn unsupported_generators_are_errors() {
    assert!(copairing(2, &el(2, "A[0]")).is_err());
    assert!(comodule_right(2, &el(2, "B'[1]")).is_err());
    assert!(copairing(2, &el(2, "pt")).is_err());
    assert!(matches!(EvenSphereCoproducts::new(3), Err(Error::UnsupportedDimension(3, _))));
    assert!("bogus".parse::<CoproductMap>().is_err());
}

#[test]
fn dual_product_examples() {
    assert_eq!(dual_product(2, &alpha(0), &alpha(0)).unwrap(), DualProduct::Signed(1, alpha(1)));
    assert_eq!(dual_product(2, &beta(0), &beta(0)).unwrap(), DualProduct::Zero);
    assert!(matches!(dual_product(2, &alpha(1), &alpha(0)).unwrap(), DualProduct::Signed(_, g) if g == alpha(2)));
    assert!(matches!(dual_product(4, &alpha(0), &beta(0)).unwrap(), DualProduct::Signed(_, g) if g == beta(1)));
    assert!(dual_product(3, &alpha(0), &alpha(0)).is_err());
}

/// ⟨φ⊗ψ, T⟩ summed term by term, with the Koszul sign (−1)^{|ψ||x|}.
fn pair_oracle(n: u32, phi: &CohomologyGenerator, psi: &CohomologyGenerator, t: &TensorElement) -> Coeff {
    let mut acc = Coeff::zero();
    for ((x, y), k) in t.terms() {
        if CohomologyGenerator::dual_of(x) == Some(*phi)
            && CohomologyGenerator::dual_of(y) == Some(*psi)
            && phi.dual(n) == *x
            && psi.dual(n) == *y
        {
            let sign = if (psi.degree(n) * x.degree()) % 2 == 0 { 1 } else { -1 };
            acc += k * c(sign);
        }
    }
    acc
}

#[test]
fn duality_holds_both_ways_on_every_generator() {
    for n in [2u32, 4] {
        let tables = EvenSphereCoproducts::new(n).unwrap();
        let gens: Vec<_> = (0..=8).flat_map(|i| [alpha(i), beta(i)]).collect();
        for phi in &gens {
            for psi in &gens {
                if phi.index + psi.index + 1 > 8 {
                    continue;
                }
                let ch = dual_product_cochain(&tables, phi, psi).unwrap();
                for x in &gens {
                    let hx = x.dual(n);
                    let full = tables.coproduct_gen(&hx).unwrap();
                    let want = pair_oracle(n, phi, psi, &full);
                    assert_eq!(ch.evaluate(n, &hx), want, "n={} {} {} {}", n, phi, psi, hx);
                    assert_eq!(kronecker(n, phi, psi, &full), want);
                }
            }
        }
    }
}

#[test]
fn layout_matches_the_extended_table() {
    // the reference columns: 0, n−1, n, 2n−2, 2n−1, 3n−3, 3n−2, 4n−4, 4n−3
    for n in [2i64, 4] {
        let layout = product_layout(&EvenSphereCoproducts::new(n as u32).unwrap(), 8).unwrap();
        let reference = common::reference_layout(n);
        for (deg, row, label) in reference {
            let e = layout.iter().find(|e| e.label == label).unwrap_or_else(|| panic!("{} missing", label));
            assert_eq!((e.degree, e.row), (deg, row), "n={} {}", n, label);
        }
        // continuing the pattern up to index 8
        assert_eq!(layout.len(), 18);
        for e in &layout {
            let k = e.generator.index + 1;
            let shift = if e.label.starts_with('W') { 2 * n - 1 } else { 0 };
            assert_eq!(e.degree, (k - 1) * (n - 1) + shift);
            assert_eq!(e.row, if k % 2 == 0 { "L" } else { "P" });
        }
        // nothing sits in the degree-n column
        assert!(layout.iter().all(|e| e.generator.symbolic_degree() != (1, 0)));
    }
}

#[test]
fn structure_reports_are_clean() {
    let r2 = verify_gh_structure(2, 8).unwrap();
    assert!(r2.is_empty(), "{:?}", r2.violations.first());
    let r4 = verify_gh_structure(4, 6).unwrap();
    assert!(r4.is_empty(), "{:?}", r4.violations.first());
    assert!(r2.checked > 1000);
    assert!(verify_gh_structure(2, 1).is_err());
}

/// The n = 2 tables with one comodule sign flipped.
struct FlippedComodule(EvenSphereCoproducts, Generator);

impl CoproductTables for FlippedComodule {
    fn n(&self) -> u32 {
        self.0.n()
    }
    fn copairing_gen(&self, g: &Generator) -> Result<TensorElement> {
        self.0.copairing_gen(g)
    }
    fn comodule_left_gen(&self, g: &Generator) -> Result<TensorElement> {
        let t = self.0.comodule_left_gen(g)?;
        Ok(if *g == self.1 { t.neg() } else { t })
    }
    fn comodule_right_gen(&self, g: &Generator) -> Result<TensorElement> {
        self.0.comodule_right_gen(g)
    }
    fn loop_coproduct_gen(&self, g: &Generator) -> Result<TensorElement> {
        self.0.loop_coproduct_gen(g)
    }
}

#[test]
fn corrupted_comodule_sign_is_reported() {
    let bad = FlippedComodule(EvenSphereCoproducts::new(2).unwrap(), Generator::b(2, 2));
    let rep = verify_gh_structure_with(&bad, 6).unwrap();
    assert!(!rep.is_empty());
    assert!(rep.violations.iter().any(|v| v.witness.contains(&"B[2]".to_string())), "{:?}", rep.violations);
}

#[test]
fn bidegree_law_over_all_maps() {
    for n in [2u32, 4, 6] {
        let tables = EvenSphereCoproducts::new(n).unwrap();
        let t = SphereAlgebraTable::new(n).unwrap();
        for g in t.basis_all(12) {
            if matches!(g.family, Family::Pt | Family::Fund) {
                continue;
            }
            let out = apply_map(&tables, CoproductMap::Full, &GradedElement::generator(t.ring, g)).unwrap();
            if !out.is_zero() {
                assert_eq!(out.total_degree(), Some(g.degree() + 1 - n as i64), "{}", g);
            }
        }
    }
}

proptest! {
    #[test]
    fn maps_are_linear(i in 0i64..6, j in 0i64..6, a in -3i64..3, b in -3i64..3) {
        let t = SphereAlgebraTable::new(2).unwrap();
        let x = GradedElement::generator(t.ring, Generator::a_prime(2 * i + 1, 2));
        let y = GradedElement::generator(t.ring, Generator::b_prime(2 * j + 1, 2));
        let s = combine(&x, &y, &c(a), &c(b)).unwrap();
        let mut expect = TensorElement::zero();
        expect.add_scaled(&copairing(2, &x).unwrap(), &c(a));
        expect.add_scaled(&copairing(2, &y).unwrap(), &c(b));
        prop_assert_eq!(copairing(2, &s).unwrap(), expect);
    }

    #[test]
    fn products_are_single_signed_generators(i in 0i64..5, j in 0i64..5, fi in any::<bool>(), fj in any::<bool>()) {
        let phi = if fi { alpha(i) } else { beta(i) };
        let psi = if fj { alpha(j) } else { beta(j) };
        let p = dual_product(4, &phi, &psi).unwrap();
        match p {
            DualProduct::Zero => prop_assert!(!fi && !fj),
            DualProduct::Signed(s, g) => {
                prop_assert!(s == 1 || s == -1);
                prop_assert_eq!(g.index, i + j + 1);
                prop_assert_eq!(g.degree(4), phi.degree(4) + psi.degree(4) + 3);
            }
        }
    }
}
