use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use sphere_strings::coalgebra::verify_gh_structure;
use sphere_strings::extension::{check_adapted, check_associativity};
use sphere_strings::homology::homology_rows;
use sphere_strings::sphere::verify_presentation;
use sphere_strings::{CoefficientRing, SphereAlgebraTable, Space};

fn presentation(c: &mut Criterion) {
    let mut g = c.benchmark_group("presentation");
    for n in [1u32, 2, 3] {
        let t = SphereAlgebraTable::new(n).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(n), &t, |b, t| b.iter(|| verify_presentation(t, black_box(8)).unwrap()));
    }
    g.finish();
}

fn adaptedness(c: &mut Criterion) {
    let mut g = c.benchmark_group("adaptedness");
    g.sample_size(20);
    for cutoff in [4i64, 8] {
        let t = SphereAlgebraTable::new(2).unwrap();
        g.bench_with_input(BenchmarkId::new("adapted", cutoff), &cutoff, |b, &k| b.iter(|| check_adapted(&t, &t, &t, k).unwrap()));
        g.bench_with_input(BenchmarkId::new("associative", cutoff), &cutoff, |b, &k| {
            b.iter(|| check_associativity(&t.extended(), k).unwrap())
        });
    }
    g.finish();
}

fn coproducts(c: &mut Criterion) {
    c.bench_function("coproduct_structure/n=2", |b| b.iter(|| verify_gh_structure(2, black_box(6)).unwrap()));
}

fn homology(c: &mut Criterion) {
    let mut g = c.benchmark_group("homology");
    for n in [2u32, 4, 7] {
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| homology_rows(Space::AntipodalPathSpace, n, CoefficientRing::Integers, black_box(200)).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, presentation, adaptedness, coproducts, homology);
criterion_main!(benches);
