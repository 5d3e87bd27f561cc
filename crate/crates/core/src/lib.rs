//! Exact combinatorics of skeleta of arithmetic curves under base change.
pub mod cli;
pub mod different_fn;
pub mod elliptic_reduction;
pub mod harmonic_cover;
pub mod io;
pub mod metric_graph;
pub mod quotient_sing;
pub mod ramification;
pub mod rational;
pub mod simultaneous;
