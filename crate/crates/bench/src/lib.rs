//! Criterion benchmarks for chainkit; see `benches/`.
