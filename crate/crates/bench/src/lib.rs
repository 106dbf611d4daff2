//! Criterion benchmarks for the table checks, homology assembly and the
//! geodesic lab; the code lives in `benches/`. Run with `cargo bench -p
//! sphere-strings-bench`.
