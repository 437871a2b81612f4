//! Criterion benchmarks for crosslab; see `benches/crossing.rs`.
