//! Criterion benchmarks for partpack-core.
