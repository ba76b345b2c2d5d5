//! Benchmarks for qdeform-core live under `benches/`; run them with
//! `cargo bench -p qdeform-bench`.
