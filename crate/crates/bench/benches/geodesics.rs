use std::f64::consts::PI;

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use sphere_strings::geodesic::integrate::DEFAULT_STEPS_PER_PI;
use sphere_strings::geodesic::{
    endpoint_kernel, integrate_geodesic, jacobi_index, shoot_antipodal, steps_for, IndexOptions, MetricSpec, ShootingOptions,
};

fn start(n: u32, speed: f64) -> (Vec<f64>, Vec<f64>) {
    let dim = n as usize + 1;
    let mut p = vec![0.0; dim];
    p[0] = 1.0;
    let mut v = vec![0.0; dim];
    v[1] = speed;
    (p, v)
}

fn integration(c: &mut Criterion) {
    let mut g = c.benchmark_group("integrate");
    for spec in ["round", "ellipsoid:1,1.2,0.9", "conformal:1;0.1:2,0,0"] {
        let m = MetricSpec::parse(spec, 2).unwrap();
        let (p, v) = start(2, 3.0 * PI);
        let steps = steps_for(&m, &p, &v, 1.0, DEFAULT_STEPS_PER_PI);
        g.bench_with_input(BenchmarkId::from_parameter(spec), &m, |b, m| {
            b.iter(|| integrate_geodesic(m, black_box(&p), black_box(&v), 1.0, steps).unwrap())
        });
    }
    g.finish();
}

fn shooting(c: &mut Criterion) {
    let mut g = c.benchmark_group("shoot");
    g.sample_size(20);
    let m = MetricSpec::parse("ellipsoid:1,1,1.1", 2).unwrap();
    let (p, mut v) = start(2, 0.0);
    // a perturbed guess so that Gauss–Newton has work to do
    v[1] = 1.05 * PI;
    v[2] = 0.05;
    m.project_velocity(&p, &mut v);
    g.bench_function("ellipsoid", |b| b.iter(|| shoot_antipodal(&m, &p, black_box(&v), &ShootingOptions::default()).unwrap()));
    g.finish();
}

fn index(c: &mut Criterion) {
    let mut g = c.benchmark_group("index");
    g.sample_size(20);
    let o = IndexOptions::default();
    for k in [0u32, 2] {
        let m = MetricSpec::round(4).unwrap();
        let (p, v) = start(4, (2 * k + 1) as f64 * PI);
        let steps = steps_for(&m, &p, &v, 1.0, DEFAULT_STEPS_PER_PI);
        let rec = integrate_geodesic(&m, &p, &v, 1.0, steps).unwrap();
        g.bench_with_input(BenchmarkId::new("jacobi", k), &rec, |b, r| b.iter(|| jacobi_index(&m, r, &o).unwrap()));
        g.bench_with_input(BenchmarkId::new("kernel", k), &rec, |b, r| b.iter(|| endpoint_kernel(&m, r, &o).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, integration, shooting, index);
criterion_main!(benches);
