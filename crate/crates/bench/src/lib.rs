//! Criterion benchmarks for the phasorlab engines live in `benches/`.
