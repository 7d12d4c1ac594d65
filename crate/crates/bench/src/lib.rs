//! Benchmarks for the geometry kernel, badness evaluation and the optimizer; see `benches/`.
