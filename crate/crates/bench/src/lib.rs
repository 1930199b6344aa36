//! Criterion benchmarks for the cdpers pipeline stages; see `benches/`.
