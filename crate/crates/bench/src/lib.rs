//! Benchmarks for the intersection engine live in `benches/`.
