//! Benchmark-only crate; see `benches/core_paths.rs`. The library target
//! exists so the package builds under plain `cargo build`.
