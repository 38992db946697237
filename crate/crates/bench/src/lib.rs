//! Benchmark-only crate; see `benches/limits.rs`.
