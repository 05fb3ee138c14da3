//! Criterion benchmarks for the elimgame solvers; see `benches/`.
