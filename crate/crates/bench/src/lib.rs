//! Criterion benchmarks for `duality-core`; see `benches/duality.rs`.
