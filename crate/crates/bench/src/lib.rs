//! Criterion benchmarks for coprime-core live in `benches/`.
