//! Criterion benchmarks for the genusmap library live in `benches/`.
