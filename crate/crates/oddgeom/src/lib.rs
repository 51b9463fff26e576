//! Verification and budgeted search for weighing matrices — square
//! {0, ±1} matrices with pairwise-orthogonal rows of fixed weight — and
//! for the finite line systems formed by their per-row zero positions.
//!
//! The crate is organized around one chain of objects:
//!
//! - [`matrix`]: the matrices themselves — parsing, serialization, exact
//!   integer verification, gauge transformations (negations and
//!   permutations), and extraction of the zero-pattern line system.
//! - [`geometry`]: line systems over up to 64 points — intersection sizes,
//!   point degrees, codegrees, the double-counting identity, per-line
//!   intersection profiles, and the axiom check that characterizes zero
//!   patterns of a given order and weight.
//! - [`graphs`]: the intersection graphs on line indices — the unit graph
//!   (edges at intersection size 1) and the weighted companion graph —
//!   with the edge, degree, triangle, diameter, and weighted-regularity
//!   bounds that any valid system must satisfy.
//! - [`search`]: budgeted exhaustive search — enumerate candidate systems
//!   by backtracking over bitmask lines, complete a pattern into a signed
//!   matrix, export the signing problem as DIMACS CNF, and certify
//!   solution sets with relabeling-invariant keys.
//!
//! Everything is exact integer arithmetic; there is no floating point in
//! any computation, report, or file format. External formats index points,
//! lines, rows, and columns from 1.
//!
//! # Runnable examples
//!
//! Each major capability has a standalone example under `examples/`:
//!
//! - `verify_matrix` — build and verify small matrices, print reports.
//! - `zero_pattern` — extract a matrix's zero-pattern line system.
//! - `analyze_fano` — run every counting and graph check on a 7-point
//!   system.
//! - `enumerate_fano` — exhaustively enumerate (7,7,3,3) systems.
//! - `sign_fano` — complete a 7-line pattern into a verified matrix.
//! - `full_search` — the two-phase pipeline at order 7, weight 4.
//! - `parallel_enumerate` — the same enumeration on several threads.
//! - `budgeted_run` — a budget-truncated run at order 23, weight 16, with
//!   checkpoint save and resume.
//! - `export_cnf` — write the signing problem as a DIMACS file.
//!
//! Run one with `cargo run --example <name>`.

pub mod geometry;
pub mod graphs;
pub mod matrix;
pub mod search;

#[cfg(test)]
pub(crate) mod testutil;

pub use geometry::{AllowedSizes, CheckReport, IntersectionProfile, LineSystem, OddGeometryParams};
pub use graphs::{build_gamma, build_weighted, gamma_report, GammaReport, PlainGraph, WeightedGraph};
pub use matrix::{VerificationReport, WeighingMatrix};
pub use search::{search_weighing, Completion, SearchBudget, SearchStats};
