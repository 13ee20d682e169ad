//! Criterion benchmarks for table generation and isometry verification live in `benches/`.
