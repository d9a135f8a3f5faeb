//! Criterion benchmarks for the tt0 pipeline. See `benches/pipeline.rs`.
