//! Criterion benchmarks for spaceform-core; see `benches/`.
