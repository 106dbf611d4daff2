use std::f64::consts::PI;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sphere_strings::geodesic::*;
use sphere_strings::Error;

fn e(dim: usize, i: usize, s: f64) -> Vec<f64> {
    let mut v = vec![0.0; dim];
    v[i] = s;
    v
}

fn round_antipodal(n: u32, k: u32) -> (MetricSpec, GeodesicRecord) {
    let m = MetricSpec::round(n).unwrap();
    let dim = n as usize + 1;
    let (p, v) = (e(dim, 0, 1.0), e(dim, 1, (2 * k + 1) as f64 * PI));
    let steps = steps_for(&m, &p, &v, 1.0, 2000);
    (m.clone(), integrate_geodesic(&m, &p, &v, 1.0, steps).unwrap())
}

/// Half-perimeter of the ellipse with semi-axes a, c by composite Simpson
/// quadrature of ∫₀^π √(a² sin²θ + c² cos²θ) dθ.
fn ellipse_half_perimeter(a: f64, c: f64) -> f64 {
    let n = 200_000;
    let h = PI / n as f64;
    let f = |t: f64| (a * a * t.sin().powi(2) + c * c * t.cos().powi(2)).sqrt();
    let mut s = f(0.0) + f(PI);
    for i in 1..n {
        s += f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

#[test]
fn half_turn_and_full_turn() {
    let m = MetricSpec::round(2).unwrap();
    let p = [1.0, 0.0, 0.0];
    let half = integrate_geodesic(&m, &p, &[0.0, PI, 0.0], 1.0, 2000).unwrap();
    assert!(half.antipodal_residual < 1e-8);
    let full = integrate_geodesic(&m, &p, &[0.0, 2.0 * PI, 0.0], 1.0, 4000).unwrap();
    assert!(full.closed_residual < 1e-8);
    assert!((full.energy - 4.0 * PI * PI).abs() < 1e-9);
}

#[test]
fn slightly_oblate_ellipsoid_energy_is_close_to_round() {
    // tilted start on the equator, compared with a 10× finer reference run
    let m = MetricSpec::ellipsoid(2, vec![1.0, 1.0, 1.05]).unwrap();
    let p = [1.0, 0.0, 0.0];
    let v = [0.0, PI * 0.6, PI * 0.8];
    let run = integrate_geodesic(&m, &p, &v, 1.0, 2000).unwrap();
    let reference = integrate_geodesic(&m, &p, &v, 1.0, 20_000).unwrap();
    assert!((run.energy - reference.energy).abs() < 1e-9 * reference.energy);
    assert!((run.energy - PI * PI).abs() < 0.01 * PI * PI);
}

#[test]
fn shooting_from_speed_three_and_nine() {
    let m = MetricSpec::round(2).unwrap();
    let p = [1.0, 0.0, 0.0];
    let opts = ShootingOptions::default();
    let s = shoot_antipodal(&m, &p, &[0.0, 1.8, 2.4], &opts).unwrap();
    assert!((s.record.energy - PI * PI).abs() < 1e-7);
    let s = shoot_antipodal(&m, &p, &[0.0, 9.0, 0.0], &opts).unwrap();
    assert!((s.record.energy - 9.0 * PI * PI).abs() < 1e-6);
    assert!(s.record.antipodal_residual < opts.tol);
}

#[test]
fn ellipsoid_meridian_matches_quadrature() {
    let m = MetricSpec::parse("ellipsoid:1,1,1.1", 2).unwrap();
    let s = shoot_antipodal(&m, &[1.0, 0.0, 0.0], &[0.0, 0.0, 3.0], &ShootingOptions::default()).unwrap();
    let oracle = ellipse_half_perimeter(1.0, 1.1);
    assert!(s.record.length >= PI && s.record.length <= 1.1 * PI);
    assert!((s.record.length - oracle).abs() < 1e-7, "{} vs {}", s.record.length, oracle);
    // the equator of the same ellipsoid is a unit circle
    let s = shoot_antipodal(&m, &[1.0, 0.0, 0.0], &[0.0, 3.0, 0.0], &ShootingOptions::default()).unwrap();
    assert!((s.record.length - PI).abs() < 1e-8);
}

#[test]
fn index_examples() {
    let o = IndexOptions::default();
    let (m, g) = round_antipodal(2, 1);
    assert_eq!(jacobi_index(&m, &g, &o).unwrap().index, 2);
    let (m, g) = round_antipodal(4, 2);
    let r = jacobi_index(&m, &g, &o).unwrap();
    assert_eq!(r.index, 12);
    assert_eq!(r.conjugate_points.len(), 4);
    assert!(r.conjugate_points.iter().all(|c| c.multiplicity == 3));
    let (m, g) = round_antipodal(2, 0);
    let r = jacobi_index(&m, &g, &o).unwrap();
    assert_eq!(r.index, 0);
    assert!(r.conjugate_points.is_empty());
}

#[test]
fn conjugate_times_are_at_multiples_of_pi_over_length() {
    let (m, g) = round_antipodal(2, 2);
    let r = jacobi_index(&m, &g, &IndexOptions::default()).unwrap();
    for (j, c) in r.conjugate_points.iter().enumerate() {
        assert!((c.t - (j + 1) as f64 / 5.0).abs() < 1e-9, "{}", c.t);
    }
}

#[test]
fn index_formula_up_to_k_5() {
    let o = IndexOptions::default();
    for n in [2u32, 4, 6] {
        for k in 0..=5 {
            let (m, g) = round_antipodal(n, k);
            let r = jacobi_index(&m, &g, &o).unwrap();
            assert_eq!(r.index as u32, 2 * k * (n - 1), "n={} k={}", n, k);
            assert!(r.is_decided());
            assert_eq!(r.kernel_at_end as u32, n - 1);
        }
    }
}

#[test]
fn nullity_is_2n_minus_1() {
    for n in [2u32, 3, 4, 6] {
        let (m, g) = round_antipodal(n, 1);
        let k = endpoint_kernel(&m, &g, &IndexOptions::default()).unwrap();
        assert_eq!(k.dimension as u32, 2 * n - 1);
        assert!(!k.ambiguous);
    }
}

#[test]
fn average_index_examples() {
    let o = IndexOptions::default();
    for n in [2u32, 4] {
        let (m, g) = round_antipodal(n, 0);
        let a = average_index(&m, &g, 12, &o).unwrap();
        assert!((a.alpha - (n - 1) as f64).abs() < 1e-12);
        // ind(γᵏ) = (k−1)(n−1) on the round sphere
        for (k, ind) in &a.iterates {
            assert_eq!(*ind as u32, (*k as u32 - 1) * (n - 1));
        }
    }
    let m = MetricSpec::parse("ellipsoid:1,1,1.1", 2).unwrap();
    let s = shoot_antipodal(&m, &[1.0, 0.0, 0.0], &[0.0, 0.0, 3.0], &ShootingOptions::default()).unwrap();
    let a = average_index(&m, &s.record, 12, &o).unwrap();
    assert!((a.alpha - 1.0).abs() < 0.15);
    assert!(a.ambiguous.is_empty());
}

#[test]
fn density_examples() {
    let e = |alpha: f64| DensityEntry { label: "prime".into(), length: PI, alpha };
    let r = density_sum(2, &[e(1.0)], 0.1, None).unwrap();
    assert!(r.passed && (r.sum - 1.0).abs() < 1e-15);
    let r = density_sum(4, &[e(3.0)], 0.1, None).unwrap();
    assert!(r.passed && (r.sum - 1.0 / 3.0).abs() < 1e-15);
    let r = density_sum(4, &[e(3.0)], 1e-9, Some(2.0)).unwrap();
    assert_eq!(r.sum, 0.0);
    assert!(!r.passed);
    let r = density_sum(2, &[DensityEntry { label: "flat".into(), length: 1e3, alpha: 0.0 }], 0.5, None).unwrap();
    assert_eq!(r.zero_alpha, vec!["flat".to_string()]);
    assert!(!r.passed);
    assert!(density_sum(3, &[e(2.0)], 0.1, None).is_err());
}

#[test]
fn error_signals() {
    let m = MetricSpec::round(2).unwrap();
    let r = integrate_with_tolerance(&m, &[1.0, 0.0, 0.0], &[0.0, 60.0, 0.0], 1.0, 20, 1e-6);
    assert!(matches!(r, Err(Error::ConstraintDrift { .. })));
    let opts = ShootingOptions { max_iterations: 1, ..Default::default() };
    let r = shoot_antipodal(&m, &[1.0, 0.0, 0.0], &[0.0, 5.0, 0.0], &opts);
    assert!(matches!(r, Err(Error::NoConvergence { iterations: 1, best_residual }) if best_residual > 0.0));
    assert!(matches!(MetricSpec::parse("conformal:1;0.2:0,1,0", 2), Err(Error::InvalidMetric(_))));
    assert!(matches!(MetricSpec::parse("conformal:-3", 2), Err(Error::InvalidMetric(_))));
    assert!(matches!(MetricSpec::parse("ellipsoid:1,-1,1", 2), Err(Error::InvalidMetric(_))));
}

#[test]
fn spectrum_scan_keeps_input_order_and_is_deterministic() {
    let m = MetricSpec::round(2).unwrap();
    let p = [1.0, 0.0, 0.0];
    let guesses = vec![vec![0.0, 9.0, 0.0], vec![0.0, 0.0, 3.0], vec![0.0, 12.0, 12.0]];
    let a = spectrum_scan(&m, &p, &guesses, &ShootingOptions::default(), &IndexOptions::default());
    let b = spectrum_scan(&m, &p, &guesses, &ShootingOptions::default(), &IndexOptions::default());
    let idx: Vec<usize> = a.iter().map(|r| r.as_ref().unwrap().index).collect();
    assert_eq!(idx, vec![2, 0, 4]);
    let la: Vec<u64> = a.iter().map(|r| r.as_ref().unwrap().length.to_bits()).collect();
    let lb: Vec<u64> = b.iter().map(|r| r.as_ref().unwrap().length.to_bits()).collect();
    assert_eq!(la, lb);
}

#[test]
fn conformal_geodesic_properties() {
    let m = MetricSpec::parse("conformal:1;0.1:2,0,0", 2).unwrap();
    let s = shoot_antipodal(&m, &[0.0, 0.0, 1.0], &[3.0, 0.0, 0.0], &ShootingOptions::default()).unwrap();
    let g = &s.record;
    assert!((g.energy - g.length * g.length).abs() < 1e-10 * g.energy);
    let fd = jacobi_vs_finite_difference(&m, g, 1e-6, &IndexOptions::default()).unwrap();
    assert!(fd.max_relative_error < 1e-4);
}

fn arb_metric() -> impl Strategy<Value = MetricSpec> {
    prop_oneof![
        Just(MetricSpec::round(2).unwrap()),
        (0.8f64..1.25, 0.8f64..1.25, 0.8f64..1.25).prop_map(|(a, b, c)| MetricSpec::ellipsoid(2, vec![a, b, c]).unwrap()),
        (0.0f64..0.3, 0.0f64..0.3).prop_map(|(c1, c2)| MetricSpec::conformal(
            2,
            vec![
                Monomial { coeff: 1.0, exponents: vec![0, 0, 0] },
                Monomial { coeff: c1, exponents: vec![2, 0, 0] },
                Monomial { coeff: c2, exponents: vec![1, 1, 0] },
            ]
        )
        .unwrap()),
    ]
}

fn start(m: &MetricSpec, seed: u64, speed: f64) -> (Vec<f64>, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut p: Vec<f64> = (0..3).map(|_| rand::Rng::gen_range(&mut rng, -1.0..1.0)).collect();
    if p.iter().map(|x| x * x).sum::<f64>() < 1e-2 {
        p = vec![1.0, 0.0, 0.0];
    }
    m.project_point(&mut p);
    let v = random_tangent(m, &p, speed, &mut rng);
    (p, v)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn energy_equals_length_squared(m in arb_metric(), seed in any::<u64>(), speed in 0.5f64..8.0) {
        let (p, v) = start(&m, seed, speed);
        let g = integrate_geodesic(&m, &p, &v, 1.0, steps_for(&m, &p, &v, 1.0, 2000)).unwrap();
        prop_assert!((g.energy - g.length * g.length).abs() <= 1e-10 * g.energy);
    }

    #[test]
    fn antipodal_symmetry_of_the_flow(m in arb_metric(), seed in any::<u64>(), speed in 0.5f64..6.0) {
        // ℤ₂-invariance: the geodesic from (−p, −v) is −γ
        let (p, v) = start(&m, seed, speed);
        let steps = steps_for(&m, &p, &v, 1.0, 2000);
        let g = integrate_geodesic(&m, &p, &v, 1.0, steps).unwrap();
        let q: Vec<f64> = p.iter().map(|x| -x).collect();
        let w: Vec<f64> = v.iter().map(|x| -x).collect();
        let h = integrate_geodesic(&m, &q, &w, 1.0, steps).unwrap();
        for (a, b) in g.end().x.iter().zip(&h.end().x) {
            prop_assert!((a + b).abs() < 1e-12);
        }
        prop_assert!((g.energy - h.energy).abs() < 1e-12 * g.energy);
    }

    #[test]
    fn jacobi_fields_match_finite_differences(m in arb_metric(), seed in any::<u64>(), speed in 1.0f64..6.0) {
        let (p, v) = start(&m, seed, speed);
        let g = integrate_geodesic(&m, &p, &v, 1.0, steps_for(&m, &p, &v, 1.0, 2000)).unwrap();
        let fd = jacobi_vs_finite_difference(&m, &g, 1e-6, &IndexOptions::default()).unwrap();
        prop_assert!(fd.max_relative_error < 1e-4, "{:?}", fd);
    }

    #[test]
    fn round_shooting_lands_on_odd_multiples_of_pi(seed in any::<u64>(), speed in 2.0f64..16.0) {
        let m = MetricSpec::round(2).unwrap();
        let p = [1.0, 0.0, 0.0];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v0 = random_tangent(&m, &p, speed, &mut rng);
        let s = shoot_antipodal(&m, &p, &v0, &ShootingOptions::default()).unwrap();
        let level = s.record.length / PI;
        let i = ((level - 1.0) / 2.0).round();
        prop_assert!(i >= 0.0);
        prop_assert!((s.record.length - (2.0 * i + 1.0) * PI).abs() < 1e-6);
        let ind = jacobi_index(&m, &s.record, &IndexOptions::default()).unwrap();
        prop_assert_eq!(ind.index as f64, 2.0 * i);
    }
}
