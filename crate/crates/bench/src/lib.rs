//! Criterion benchmarks for the transducer kernels and sweeps; see `benches/`.
