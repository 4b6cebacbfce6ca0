//! Criterion benchmarks for qadd-core live in `benches/`.
