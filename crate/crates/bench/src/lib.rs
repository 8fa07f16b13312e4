//! Criterion benchmarks for the two pairing pipelines live in `benches/`.
