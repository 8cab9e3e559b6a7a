//! Criterion benchmarks for the exhaustive character sums live in `benches/`.
